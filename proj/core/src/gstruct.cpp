#include "srcartan/gstruct.hpp"

#include <cmath>

#include "srcartan/errors.hpp"

namespace srcartan {

using linalg::QuotientModel;

std::string_view to_string(Level level) {
  switch (level) {
    case Level::kG:
      return "g";
    case Level::kG1:
      return "g1";
    case Level::kG2:
      return "g2";
  }
  return "?";
}

QMatrix j0(int n) {
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  QMatrix j(m, m);
  for (std::size_t k = 0; k < m; k += 2) {
    j(k + 1, k) = 1;
    j(k, k + 1) = -1;
  }
  return j;
}

namespace {

QMatrix embed(const QMatrix& block, std::size_t dim) {
  QMatrix out(dim, dim);
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) out(i, j) = block(i, j);
  return out;
}

QVector flatten_matrix(const QMatrix& m) {
  QVector out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

QMatrix rotation_generator(std::size_t p, std::size_t q, std::size_t dim) {
  QMatrix m(dim, dim);
  m(q, p) = 1;
  m(p, q) = -1;
  return m;
}

std::string basis_name(std::size_t i, std::size_t dim) {
  return i + 1 == dim ? "v" : "e" + std::to_string(i + 1);
}

// u(n) inside so(2n), via the projection X -> (X - J X J) / 2 of each I_pq,
// keeping the first independent images in (p, q) order.
void append_unitary(int n, std::vector<QMatrix>& basis, std::vector<std::string>& labels) {
  const std::size_t dim = model_dim(n);
  const QMatrix j = embed(j0(n), dim);
  std::vector<QVector> accepted;
  Subspace span(dim * dim);
  for (std::size_t p = 0; p + 1 < dim; ++p) {
    for (std::size_t q = p + 1; q + 1 < dim; ++q) {
      const QMatrix x = rotation_generator(p, q, dim);
      const QMatrix a = (x - j * x * j) * Rational(1, 2);
      const QVector flat = flatten_matrix(a);
      if (span.contains(flat)) continue;
      accepted.push_back(flat);
      span = Subspace::span(dim * dim, accepted);
      basis.push_back(a);
      labels.push_back("A_" + std::to_string(p + 1) + "," + std::to_string(q + 1));
    }
  }
}

}  // namespace

std::vector<Eigen::MatrixXd> unflatten(int n, const Eigen::VectorXd& flat) {
  const std::size_t dim = model_dim(n);
  if (static_cast<std::size_t>(flat.size()) != hom2_dim(n)) {
    throw std::invalid_argument("unflatten: wrong size");
  }
  std::vector<Eigen::MatrixXd> out(dim, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                              static_cast<Eigen::Index>(dim)));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double v = flat(static_cast<Eigen::Index>(QHom2::index(n, k, i, j)));
        out[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        out[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = -v;
      }
    }
  }
  return out;
}

Eigen::VectorXd flatten(int n, const std::vector<Eigen::MatrixXd>& components) {
  const std::size_t dim = model_dim(n);
  Eigen::VectorXd out(static_cast<Eigen::Index>(hom2_dim(n)));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        out(static_cast<Eigen::Index>(QHom2::index(n, k, i, j))) =
            components[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

std::string hom2_label(int n, std::size_t flat_index) {
  const std::size_t dim = model_dim(n);
  const auto [i, j] = pair_at(flat_index / dim, dim);
  return basis_name(i, dim) + "^" + basis_name(j, dim) + " (x) " +
         basis_name(flat_index % dim, dim);
}

LieAlgebraModel build_lie_algebra(int n, Level level) {
  if (n < 1) throw std::invalid_argument("build_lie_algebra: n must be positive");
  const std::size_t dim = model_dim(n);
  const std::size_t v = dim - 1;
  LieAlgebraModel model;
  model.n = n;
  model.level = level;
  if (level == Level::kG) {
    for (std::size_t p = 0; p < v; ++p) {
      for (std::size_t q = p + 1; q < v; ++q) {
        model.basis.push_back(rotation_generator(p, q, dim));
        model.labels.push_back("I_" + std::to_string(p + 1) + "," + std::to_string(q + 1));
      }
    }
  } else {
    append_unitary(n, model.basis, model.labels);
  }
  if (level != Level::kG2) {
    for (std::size_t k = 0; k < v; ++k) {
      QMatrix m(dim, dim);
      m(k, v) = 1;
      model.basis.push_back(m);
      model.labels.push_back("II_" + std::to_string(k + 1));
    }
  }
  if (level == Level::kG) {
    QMatrix m(dim, dim);
    m(v, v) = 1;
    model.basis.push_back(m);
    model.labels.push_back("III");
  }
  return model;
}

std::optional<QVector> algebra_coordinates(const LieAlgebraModel& model, const QMatrix& x) {
  const std::size_t dim = model.space_dim();
  std::vector<QVector> cols;
  for (const QMatrix& b : model.basis) cols.push_back(flatten_matrix(b));
  // solve() returns some solution of a consistent system; basis matrices are
  // independent, so it is the unique one when it exists.
  return linalg::solve(QMatrix::from_columns(cols, dim * dim), flatten_matrix(x));
}

QHom2 amap(int n, const std::vector<QMatrix>& s) {
  const std::size_t dim = model_dim(n);
  if (s.size() != dim) throw std::invalid_argument("amap: need one matrix per basis vector");
  QHom2 out(n);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) out.set(k, i, j, s[i](k, j) - s[j](k, i));
  return out;
}

std::vector<Eigen::MatrixXd> amap(int n, const std::vector<Eigen::MatrixXd>& s) {
  const auto dim = static_cast<Eigen::Index>(model_dim(n));
  if (static_cast<Eigen::Index>(s.size()) != dim) {
    throw std::invalid_argument("amap: need one matrix per basis vector");
  }
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(dim), Eigen::MatrixXd::Zero(dim, dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      for (Eigen::Index k = 0; k < dim; ++k)
        out[static_cast<std::size_t>(k)](i, j) =
            s[static_cast<std::size_t>(i)](k, j) - s[static_cast<std::size_t>(j)](k, i);
  return out;
}

QMatrix amap_matrix(const LieAlgebraModel& model) {
  const int n = model.n;
  const std::size_t dim = model.space_dim();
  const std::size_t g = model.dim();
  QMatrix m(hom2_dim(n), dim * g);
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t a = 0; a < g; ++a) {
      const QMatrix& x = model.basis[a];
      const std::size_t col = s * g + a;
      // A(e_s^* (x) X)^k_ij = delta_si X_kj - delta_sj X_ki
      for (std::size_t j = 0; j < dim; ++j) {
        if (j == s) continue;
        for (std::size_t k = 0; k < dim; ++k) {
          if (x(k, j) == 0) continue;
          if (s < j) {
            m(QHom2::index(n, k, s, j), col) += x(k, j);
          } else {
            m(QHom2::index(n, k, j, s), col) -= x(k, j);
          }
        }
      }
    }
  }
  return m;
}

OrbitSpaceModel build_orbit_space(int n, Level level) {
  const std::size_t dim = model_dim(n);
  const std::size_t v = dim - 1;
  const std::size_t total = hom2_dim(n);
  Subspace image = linalg::column_space(amap_matrix(build_lie_algebra(n, level)));

  auto unit = [&](std::size_t index) {
    QVector e(total, Rational(0));
    e[index] = 1;
    return e;
  };
  std::vector<QVector> preferred;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j) preferred.push_back(unit(QHom2::index(n, v, i, j)));
  if (level != Level::kG) {
    for (std::size_t i = 0; i < v; ++i) preferred.push_back(unit(QHom2::index(n, v, i, v)));
  }
  QuotientModel quotient = QuotientModel::with_greedy_section(image, std::move(preferred));

  std::vector<std::string> labels;
  std::vector<Summand> summands;
  for (std::size_t c = 0; c < quotient.dim(); ++c) {
    const QVector& rep = quotient.section()[c];
    std::size_t index = 0;
    while (rep[index] == 0) ++index;
    labels.push_back(hom2_label(n, index));
    const auto [i, j] = pair_at(index / dim, dim);
    const std::size_t k = index % dim;
    std::string name = "complement";
    if (k == v && j < v) name = "Hom(V'^V', V/V')";
    if (k == v && j == v) name = "Hom(V'^V/V', V/V')";
    (void)i;
    if (summands.empty() || summands.back().name != name) {
      summands.push_back({name, c, c + 1});
    } else {
      summands.back().end = c + 1;
    }
  }
  return OrbitSpaceModel{n, level, std::move(image), std::move(quotient), std::move(labels),
                         std::move(summands)};
}

QMatrix group_matrix(const QMatrix& a, const QVector& b, const Rational& c) {
  const std::size_t m = a.rows();
  if (a.cols() != m || b.size() != m) throw std::invalid_argument("group_matrix: block sizes");
  QMatrix g(m + 1, m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) g(i, j) = a(i, j);
    g(i, m) = b[i];
  }
  g(m, m) = c;
  return g;
}

namespace {

QMatrix top_left(const QMatrix& g) {
  const std::size_t m = g.rows() - 1;
  QMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = g(i, j);
  return a;
}

}  // namespace

bool in_group(const QMatrix& g, Level level) {
  const std::size_t dim = g.rows();
  if (dim < 3 || dim % 2 == 0 || g.cols() != dim) return false;
  const std::size_t v = dim - 1;
  for (std::size_t j = 0; j < v; ++j)
    if (g(v, j) != 0) return false;
  if (g(v, v) == 0) return false;
  const QMatrix a = top_left(g);
  if (!(a.transpose() * a == QMatrix::identity(v))) return false;
  if (level == Level::kG) return true;
  const QMatrix j = j0(static_cast<int>(v / 2));
  if (!(a * j == j * a) || g(v, v) != 1) return false;
  if (level == Level::kG1) return true;
  for (std::size_t i = 0; i < v; ++i)
    if (g(i, v) != 0) return false;
  return true;
}

bool in_group(const Eigen::MatrixXd& g, Level level, double tol) {
  const Eigen::Index dim = g.rows();
  if (dim < 3 || dim % 2 == 0 || g.cols() != dim) return false;
  const Eigen::Index v = dim - 1;
  if (g.row(v).head(v).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(g(v, v)) <= tol) return false;
  const Eigen::MatrixXd a = g.topLeftCorner(v, v);
  if ((a.transpose() * a - Eigen::MatrixXd::Identity(v, v)).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  if (level == Level::kG) return true;
  const Eigen::MatrixXd j = j0(static_cast<int>(v / 2)).to_double();
  if ((a * j - j * a).cwiseAbs().maxCoeff() > tol || std::abs(g(v, v) - 1.0) > tol) return false;
  if (level == Level::kG1) return true;
  return g.col(v).head(v).cwiseAbs().maxCoeff() <= tol;
}

GroupElement GroupElement::make(Level level, const QMatrix& a, const QVector& b,
                                const Rational& c) {
  GroupElement out{level, group_matrix(a, b, c)};
  if (!in_group(out.matrix, level)) {
    throw std::invalid_argument("GroupElement: blocks violate the constraints of level " +
                                std::string(to_string(level)));
  }
  return out;
}

QMatrix GroupElement::a() const { return top_left(matrix); }

QVector GroupElement::b() const {
  const std::size_t v = matrix.rows() - 1;
  QVector out(v);
  for (std::size_t i = 0; i < v; ++i) out[i] = matrix(i, v);
  return out;
}

Rational GroupElement::c() const { return matrix(matrix.rows() - 1, matrix.cols() - 1); }

QHom2 sigma_action(const QMatrix& g, const QHom2& t) {
  const int n = t.n();
  const std::size_t dim = t.dim();
  const auto ginv = linalg::inverse(g);
  if (!ginv) throw std::invalid_argument("sigma_action: singular group element");
  // T(g u, g w) componentwise: (g^T T^a g)_ij
  std::vector<QMatrix> pulled;
  for (std::size_t a = 0; a < dim; ++a) {
    QMatrix ta(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) ta(i, j) = t.get(a, i, j);
    pulled.push_back(g.transpose() * ta * g);
  }
  QHom2 out(n);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        Rational s = 0;
        for (std::size_t a = 0; a < dim; ++a) {
          if ((*ginv)(k, a) != 0) s += (*ginv)(k, a) * pulled[a](i, j);
        }
        out.set(k, i, j, s);
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> sigma_action(const Eigen::MatrixXd& g,
                                          const std::vector<Eigen::MatrixXd>& t) {
  const Eigen::MatrixXd ginv = g.inverse();
  const std::size_t dim = t.size();
  std::vector<Eigen::MatrixXd> pulled;
  for (const auto& ta : t) pulled.push_back(g.transpose() * ta * g);
  std::vector<Eigen::MatrixXd> out(dim, Eigen::MatrixXd::Zero(g.rows(), g.cols()));
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t a = 0; a < dim; ++a)
      out[k] += ginv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) * pulled[a];
  return out;
}

QVector e_action(const OrbitSpaceModel& e, const QMatrix& g, const QVector& coords) {
  const auto ginv = linalg::inverse(g);
  if (!ginv) throw std::invalid_argument("e_action: singular group element");
  const QHom2 lifted(e.n, e.quotient.lift(coords));
  return e.quotient.coordinates(sigma_action(*ginv, lifted).flat());
}

QMatrix cayley(const QMatrix& k) {
  const QMatrix id = QMatrix::identity(k.rows());
  const auto inv = linalg::inverse(id + k);
  if (!inv) throw std::invalid_argument("cayley: I + K is singular");
  return (id - k) * *inv;
}

namespace {

// Coordinates on co(2n): antisymmetric generators in (p, q) order, then I.
std::vector<QMatrix> conformal_orthogonal_basis(std::size_t m) {
  std::vector<QMatrix> basis;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p + 1; q < m; ++q) basis.push_back(rotation_generator(p, q, m));
  basis.push_back(QMatrix::identity(m));
  return basis;
}

}  // namespace

StabilizerAlgebra stabilizer_algebra(const QMatrix& omega) {
  const std::size_t m = omega.rows();
  if (m == 0 || m % 2 != 0 || omega.cols() != m || !(omega.transpose() == omega * Rational(-1))) {
    throw std::invalid_argument("stabilizer_algebra: omega must be antisymmetric of even size");
  }
  if (!linalg::inverse(omega)) throw ContactDegeneracy("stabilizer_algebra: omega is degenerate");
  const std::vector<QMatrix> basis = conformal_orthogonal_basis(m);
  std::vector<QVector> cols;
  for (const QMatrix& b : basis) cols.push_back(flatten_matrix(b.transpose() * omega + omega * b));
  const Subspace ker = linalg::kernel(QMatrix::from_columns(cols, m * m));
  StabilizerAlgebra out;
  for (const QVector& c : ker.basis()) {
    QMatrix x(m, m);
    for (std::size_t a = 0; a < basis.size(); ++a)
      if (c[a] != 0) x = x + basis[a] * c[a];
    out.basis.push_back(x);
  }
  return out;
}

std::size_t stabilizer_dimension(const Eigen::MatrixXd& omega, double tol) {
  const auto m = static_cast<std::size_t>(omega.rows());
  const std::vector<QMatrix> basis = conformal_orthogonal_basis(m);
  Eigen::MatrixXd lin(omega.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const Eigen::MatrixXd b = basis[a].to_double();
    const Eigen::MatrixXd r = b.transpose() * omega + omega * b;
    lin.col(static_cast<Eigen::Index>(a)) = r.reshaped();
  }
  return linalg::numeric_nullity(lin, tol);
}

}  // namespace srcartan
