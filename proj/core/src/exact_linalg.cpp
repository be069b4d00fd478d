#include "srcartan/exact_linalg.hpp"

#include <algorithm>
#include <cassert>

#include "srcartan/errors.hpp"

namespace srcartan::linalg {

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("QMatrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    assert(rows[i].size() == cols);
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& cols, std::size_t rows) {
  QMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    assert(cols[j].size() == rows);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

QVector QMatrix::row(std::size_t i) const {
  return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

QVector QMatrix::column(std::size_t j) const {
  QVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

QMatrix QMatrix::operator*(const QMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("QMatrix: shape mismatch in product");
  QMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        if (rhs(k, j) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("QMatrix: shape mismatch in product");
  QVector out(rows_, Rational(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if ((*this)(i, k) != 0 && v[k] != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

QMatrix QMatrix::operator+(const QMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("QMatrix: shape");
  QMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

QMatrix QMatrix::operator-(const QMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("QMatrix: shape");
  QMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

QMatrix QMatrix::operator*(const Rational& s) const {
  QMatrix out = *this;
  for (auto& q : out.data_) q *= s;
  return out;
}

Eigen::MatrixXd QMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).get_d();
  return m;
}

RrefResult rref(QMatrix m) {
  RrefResult out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = c; j < cols; ++j) std::swap(m(pivot, j), m(r, j));
    }
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.form = std::move(m);
  return out;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: non-square matrix");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto red = rref(std::move(aug));
  if (red.rank < n || red.pivots[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red.form(i, n + j);
  return inv;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto red = rref(std::move(aug));
  QVector x(m.cols(), Rational(0));
  for (std::size_t r = 0; r < red.rank; ++r) {
    const std::size_t p = red.pivots[r];
    if (p == m.cols()) return std::nullopt;
    x[p] = red.form(r, m.cols());
  }
  return x;
}

Subspace::Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<QVector>& generators) {
  Subspace s(ambient_dim);
  if (generators.empty()) return s;
  auto red = rref(QMatrix::from_rows(generators, ambient_dim));
  s.basis_.reserve(red.rank);
  for (std::size_t r = 0; r < red.rank; ++r) s.basis_.push_back(red.form.row(r));
  s.pivots_ = std::move(red.pivots);
  return s;
}

Subspace Subspace::whole(std::size_t ambient_dim) {
  Subspace s(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    QVector e(ambient_dim, Rational(0));
    e[i] = 1;
    s.basis_.push_back(std::move(e));
    s.pivots_.push_back(i);
  }
  return s;
}

QMatrix Subspace::basis_matrix() const { return QMatrix::from_columns(basis_, ambient_); }

bool Subspace::contains(const QVector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace::contains: dimension");
  QVector r = v;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const Rational f = r[pivots_[i]];
    if (f == 0) continue;
    for (std::size_t j = pivots_[i]; j < ambient_; ++j) {
      if (basis_[i][j] != 0) r[j] -= f * basis_[i][j];
    }
  }
  return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [this](const QVector& v) { return contains(v); });
}

Subspace Subspace::operator+(const Subspace& other) const {
  std::vector<QVector> gens = basis_;
  gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
  return span(ambient_, gens);
}

bool Subspace::operator==(const Subspace& other) const {
  return ambient_ == other.ambient_ && basis_ == other.basis_;
}

Subspace kernel(const QMatrix& m) {
  const std::size_t cols = m.cols();
  auto red = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<QVector> gens;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < red.rank; ++r) v[red.pivots[r]] = -red.form(r, free);
    gens.push_back(std::move(v));
  }
  return Subspace::span(cols, gens);
}

Subspace column_space(const QMatrix& m) {
  std::vector<QVector> gens;
  gens.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) gens.push_back(m.column(j));
  return Subspace::span(m.rows(), gens);
}

namespace {

bool positive_definite(const QMatrix& gram) {
  // Symmetric Gaussian elimination; all pivots must be positive.
  QMatrix a = gram;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

}  // namespace

Subspace orthogonal_complement(const Subspace& s, const QMatrix& gram) {
  const std::size_t d = s.ambient_dim();
  if (gram.rows() != d || gram.cols() != d) {
    throw std::invalid_argument("orthogonal_complement: gram has wrong shape");
  }
  if (!(gram == gram.transpose()) || !positive_definite(gram)) {
    throw GeometryError("orthogonal_complement: gram matrix is not symmetric positive definite");
  }
  if (s.dim() == 0) return Subspace::whole(d);
  QMatrix constraints = QMatrix::from_rows(s.basis(), d) * gram;
  return kernel(constraints);
}

namespace {

// Incremental echelon set used by the greedy section builder.
class EchelonSet {
 public:
  explicit EchelonSet(std::size_t d) : d_(d) {}

  // Inserts v if independent of the stored rows; returns whether it did.
  bool insert(const QVector& v) {
    QVector r = v;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational f = r[pivots_[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < d_; ++j)
        if (rows_[i][j] != 0) r[j] -= f * rows_[i][j];
    }
    auto it = std::find_if(r.begin(), r.end(), [](const Rational& q) { return q != 0; });
    if (it == r.end()) return false;
    const auto p = static_cast<std::size_t>(it - r.begin());
    const Rational inv = 1 / r[p];
    for (auto& q : r) q *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational f = rows_[i][p];
      if (f == 0) continue;
      for (std::size_t j = 0; j < d_; ++j)
        if (r[j] != 0) rows_[i][j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

 private:
  std::size_t d_;
  std::vector<QVector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

QuotientModel::QuotientModel(Subspace kernel, std::vector<QVector> section)
    : kernel_(std::move(kernel)), section_(std::move(section)) {
  const std::size_t d = kernel_.ambient_dim();
  if (kernel_.dim() + section_.size() != d) {
    throw InternalConsistencyError("QuotientModel: section has the wrong size");
  }
  std::vector<QVector> cols = kernel_.basis();
  cols.insert(cols.end(), section_.begin(), section_.end());
  auto binv = inverse(QMatrix::from_columns(cols, d));
  if (!binv) throw InternalConsistencyError("QuotientModel: section does not complement kernel");
  coordinate_map_ = QMatrix(section_.size(), d);
  for (std::size_t i = 0; i < section_.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) coordinate_map_(i, j) = (*binv)(kernel_.dim() + i, j);
  projector_ = QMatrix::from_columns(section_, d) * coordinate_map_;
}

QuotientModel QuotientModel::with_greedy_section(Subspace kernel, std::vector<QVector> preferred) {
  const std::size_t d = kernel.ambient_dim();
  EchelonSet span(d);
  for (const auto& v : kernel.basis()) span.insert(v);
  std::vector<QVector> section;
  for (auto& v : preferred) {
    if (span.insert(v)) section.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < d && kernel.dim() + section.size() < d; ++i) {
    QVector e(d, Rational(0));
    e[i] = 1;
    if (span.insert(e)) section.push_back(std::move(e));
  }
  return QuotientModel(std::move(kernel), std::move(section));
}

QVector QuotientModel::coordinates(const QVector& v) const { return coordinate_map_ * v; }

QVector QuotientModel::lift(const QVector& coords) const {
  if (coords.size() != section_.size()) throw std::invalid_argument("lift: wrong arity");
  QVector v(ambient_dim(), Rational(0));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += coords[i] * section_[i][j];
  }
  return v;
}

Eigen::VectorXd least_squares_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& target) {
  const Eigen::MatrixXd normal = m.transpose() * m;
  const Eigen::VectorXd rhs = m.transpose() * target;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
  cod.setThreshold(1e-13);
  return cod.solve(rhs);
}

std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++r;
  return r;
}

std::size_t numeric_nullity(const Eigen::MatrixXd& m, double tol) {
  return static_cast<std::size_t>(m.cols()) - numeric_rank(m, tol);
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace srcartan::linalg
