#pragma once

// Model space V = R^{2n+1} with basis (e_1, ..., e_2n, v), the Lie algebras
// g > g1 > g2 acting on it, the map A(S)(u ^ w) = S(u)w - S(w)u, and the
// orbit spaces Hom(V ^ V, V) / A(Hom(V, g)).
//
// Indices are 0-based throughout: e_i is index i - 1 and v is index 2n.
// A tensor T in Hom(V ^ V, V) is stored flat, T^k_ij (i < j) at
// pair_index(i, j) * (2n + 1) + k.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/exact_linalg.hpp"
#include "srcartan/indexing.hpp"

namespace srcartan {

using linalg::QMatrix;
using linalg::QVector;
using linalg::Rational;
using linalg::Subspace;

enum class Level { kG, kG1, kG2 };

std::string_view to_string(Level level);

constexpr std::size_t model_dim(int n) { return 2 * static_cast<std::size_t>(n) + 1; }
constexpr std::size_t hom2_dim(int n) { return model_dim(n) * pair_count(model_dim(n)); }

/// Standard complex structure on V' = span(e_1..e_2n): J0 e_{2k-1} = e_{2k}.
QMatrix j0(int n);

template <class S>
class Hom2Tensor {
 public:
  Hom2Tensor() = default;
  explicit Hom2Tensor(int n) : n_(n), data_(hom2_dim(n), S(0)) {}
  Hom2Tensor(int n, std::vector<S> flat) : n_(n), data_(std::move(flat)) {
    if (data_.size() != hom2_dim(n)) throw std::invalid_argument("Hom2Tensor: wrong flat size");
  }

  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return model_dim(n_); }
  static std::size_t index(int n, std::size_t k, std::size_t i, std::size_t j) {
    return pair_index(i, j, model_dim(n)) * model_dim(n) + k;
  }

  /// Antisymmetric read: get(k, j, i) == -get(k, i, j), get(k, i, i) == 0.
  S get(std::size_t k, std::size_t i, std::size_t j) const {
    if (i == j) return S(0);
    if (i < j) return data_[index(n_, k, i, j)];
    return S(-data_[index(n_, k, j, i)]);
  }
  void set(std::size_t k, std::size_t i, std::size_t j, const S& value) {
    if (i == j) throw std::invalid_argument("Hom2Tensor: diagonal entry");
    if (i < j) {
      data_[index(n_, k, i, j)] = value;
    } else {
      data_[index(n_, k, j, i)] = -value;
    }
  }

  const std::vector<S>& flat() const noexcept { return data_; }
  std::vector<S>& flat() noexcept { return data_; }

 private:
  int n_ = 0;
  std::vector<S> data_;
};

using QHom2 = Hom2Tensor<Rational>;

/// Flat float copy of a tensor, T^k as the full antisymmetric matrices.
std::vector<Eigen::MatrixXd> unflatten(int n, const Eigen::VectorXd& flat);
Eigen::VectorXd flatten(int n, const std::vector<Eigen::MatrixXd>& components);

/// Human label of a flat index, e.g. "e1^e2 (x) v".
std::string hom2_label(int n, std::size_t flat_index);

struct LieAlgebraModel {
  int n = 0;
  Level level = Level::kG;
  std::vector<QMatrix> basis;  // (2n+1) x (2n+1)
  std::vector<std::string> labels;

  std::size_t dim() const noexcept { return basis.size(); }
  std::size_t space_dim() const noexcept { return model_dim(n); }
};

LieAlgebraModel build_lie_algebra(int n, Level level);

/// Coordinates of X in the model's basis, nullopt when X is outside the algebra.
std::optional<QVector> algebra_coordinates(const LieAlgebraModel& model, const QMatrix& x);

/// A(S) for S in Hom(V, gl(V)) given as the images S(e_s), s = 0..2n.
QHom2 amap(int n, const std::vector<QMatrix>& s);
std::vector<Eigen::MatrixXd> amap(int n, const std::vector<Eigen::MatrixXd>& s);

/// Matrix of A on Hom(V, g); column s * dim(g) + a is A(e_s^* (x) basis[a]).
QMatrix amap_matrix(const LieAlgebraModel& model);

struct Summand {
  std::string name;
  std::size_t begin = 0;  // range of quotient coordinates
  std::size_t end = 0;
};

struct OrbitSpaceModel {
  int n = 0;
  Level level = Level::kG;
  Subspace image;  // A(Hom(V, g))
  linalg::QuotientModel quotient;
  std::vector<std::string> labels;  // per quotient coordinate
  std::vector<Summand> summands;

  std::size_t dim() const noexcept { return quotient.dim(); }
};

/// E = Hom(V ^ V, V) / A(Hom(V, g)) with standard-basis coset representatives.
/// Level g uses (e_i^* ^ e_j^*) (x) v, identifying E with Hom(V' ^ V', V / V').
/// Level g1 lists Hom(V' ^ V', V / V') first, then Hom(V' ^ V / V', V / V'),
/// then a greedy completion.
OrbitSpaceModel build_orbit_space(int n, Level level);

/// Block matrix [[A, b], [0, c]].
QMatrix group_matrix(const QMatrix& a, const QVector& b, const Rational& c);

/// Whether g has the block shape and constraints of the level's group:
/// g: A orthogonal, c != 0; g1: also A J0 = J0 A and c = 1; g2: also b = 0.
bool in_group(const QMatrix& g, Level level);
bool in_group(const Eigen::MatrixXd& g, Level level, double tol);

struct GroupElement {
  Level level = Level::kG;
  QMatrix matrix;

  /// Throws std::invalid_argument when the blocks violate the level.
  static GroupElement make(Level level, const QMatrix& a, const QVector& b, const Rational& c);
  QMatrix a() const;
  QVector b() const;
  Rational c() const;
};

/// (sigma(g) T)(u, w) = g^{-1} T(g u, g w).
QHom2 sigma_action(const QMatrix& g, const QHom2& t);
std::vector<Eigen::MatrixXd> sigma_action(const Eigen::MatrixXd& g,
                                          const std::vector<Eigen::MatrixXd>& t);

/// Action on E induced by the coframe convention theta -> g theta, under
/// which structure coefficients move by sigma(g^{-1}).
QVector e_action(const OrbitSpaceModel& e, const QMatrix& g, const QVector& coords);

/// Cayley transform (I - K)(I + K)^{-1}; orthogonal for antisymmetric K.
QMatrix cayley(const QMatrix& k);

struct StabilizerAlgebra {
  std::vector<QMatrix> basis;  // 2n x 2n matrices a + t I
  std::size_t dim() const noexcept { return basis.size(); }
};

/// {X = a + t I : a antisymmetric, X^T omega + omega X = 0}.
/// Throws ContactDegeneracy for singular omega.
StabilizerAlgebra stabilizer_algebra(const QMatrix& omega);
std::size_t stabilizer_dimension(const Eigen::MatrixXd& omega, double tol);

}  // namespace srcartan
