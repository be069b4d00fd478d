#pragma once

// Independent reference computations used as test oracles. None of these
// share code with the library paths they check.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "srcartan/exact_linalg.hpp"
#include "srcartan/symexpr.hpp"

namespace oracle {

using srcartan::linalg::QMatrix;
using srcartan::linalg::Rational;

// Rank over Z/p after clearing denominators row by row.
inline std::size_t rank_mod_p(const QMatrix& m, std::uint64_t p = 2147483647ULL) {
  std::vector<std::vector<std::uint64_t>> a(m.rows(), std::vector<std::uint64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class lcm = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_class v = m(i, j).get_num() * (lcm / m(i, j).get_den());
      mpz_class r;
      mpz_mod_ui(r.get_mpz_t(), v.get_mpz_t(), p);
      a[i][j] = r.get_ui();
    }
  }
  auto powmod = [p](std::uint64_t b, std::uint64_t e) {
    unsigned __int128 r = 1, x = b;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = powmod(a[rank][c], p - 2);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const unsigned __int128 f = static_cast<unsigned __int128>(a[r][c]) * inv % p;
      for (std::size_t k = c; k < m.cols(); ++k) {
        const unsigned __int128 sub = f * a[rank][k] % p;
        a[r][k] = static_cast<std::uint64_t>((a[r][k] + p - sub) % p);
      }
    }
    ++rank;
  }
  return rank;
}

// Characteristic polynomial coefficients c_0..c_n of det(t I - M), c_n = 1,
// by the Faddeev-LeVerrier recursion.
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(n - k + 1)] * Eigen::MatrixXd::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

inline Rational random_rational(std::mt19937& rng, int range = 9, int den = 4) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> d(1, den);
  Rational q(num(rng), d(rng));
  q.canonicalize();
  return q;
}

inline QMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols,
                             double zero_fraction = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (u(rng) >= zero_fraction) m(i, j) = random_rational(rng);
  return m;
}

// Multivariate polynomials with rational coefficients, keyed by exponent vectors.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Rational>;

inline Polynomial poly_add(const Polynomial& a, const Polynomial& b, int sign = 1) {
  Polynomial out = a;
  for (const auto& [mono, c] : b) {
    out[mono] += sign * c;
    if (out[mono] == 0) out.erase(mono);
  }
  return out;
}

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out[m] += ca * cb;
      if (out[m] == 0) out.erase(m);
    }
  }
  return out;
}

// Expands an Expr built from constants, variables, +, -, *, unary minus and
// non-negative integer powers. Throws on anything else.
inline Polynomial expand(const srcartan::sym::Expr& e, std::size_t nvars) {
  using srcartan::sym::Op;
  switch (e.op()) {
    case Op::kConst: {
      Polynomial p;
      if (e.value() != 0) p[Monomial(nvars, 0)] = e.value();
      return p;
    }
    case Op::kVar: {
      Monomial m(nvars, 0);
      m.at(e.index()) = 1;
      return Polynomial{{m, Rational(1)}};
    }
    case Op::kAdd:
      return poly_add(expand(e.lhs(), nvars), expand(e.rhs(), nvars));
    case Op::kSub:
      return poly_add(expand(e.lhs(), nvars), expand(e.rhs(), nvars), -1);
    case Op::kMul:
      return poly_mul(expand(e.lhs(), nvars), expand(e.rhs(), nvars));
    case Op::kNeg:
      return poly_add({}, expand(e.lhs(), nvars), -1);
    case Op::kPow: {
      if (e.exponent() < 0) throw std::invalid_argument("expand: negative power");
      Polynomial base = expand(e.lhs(), nvars);
      Polynomial out{{Monomial(nvars, 0), Rational(1)}};
      for (int i = 0; i < e.exponent(); ++i) out = poly_mul(out, base);
      return out;
    }
    default:
      throw std::invalid_argument("expand: not a polynomial");
  }
}

}  // namespace oracle
