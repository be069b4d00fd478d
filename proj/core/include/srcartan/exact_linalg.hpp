#pragma once

// Exact-rational and floating-point linear algebra.
//
// The exact tower (QMatrix, Subspace, QuotientModel) is used for every
// dimension count and membership test; the float tower (Eigen) is used for
// pointwise geometry. Floating comparisons go through a single absolute
// tolerance, kDefaultTolerance unless a caller passes its own.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

namespace srcartan::linalg {

using Rational = mpq_class;
using QVector = std::vector<Rational>;

inline constexpr double kDefaultTolerance = 1e-9;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);
  static QMatrix from_columns(const std::vector<QVector>& cols, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  QVector row(std::size_t i) const;
  QVector column(std::size_t j) const;
  QMatrix transpose() const;
  bool is_zero() const;

  QMatrix operator*(const QMatrix& rhs) const;
  QVector operator*(const QVector& v) const;
  QMatrix operator+(const QMatrix& rhs) const;
  QMatrix operator-(const QMatrix& rhs) const;
  QMatrix operator*(const Rational& s) const;
  bool operator==(const QMatrix& rhs) const = default;

  Eigen::MatrixXd to_double() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  QMatrix form;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row-echelon form by Gauss-Jordan elimination over Q.
RrefResult rref(QMatrix m);

/// Unique solution of a square nonsingular system, nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& m);

/// Some solution of m x = b (free variables set to 0), nullopt if inconsistent.
std::optional<QVector> solve(const QMatrix& m, const QVector& b);

/// A linear subspace of Q^d stored as the nonzero rows of its unique RREF.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim = 0);

  static Subspace span(std::size_t ambient_dim, const std::vector<QVector>& generators);
  static Subspace whole(std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<QVector>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Basis vectors as the columns of an ambient_dim x dim matrix.
  QMatrix basis_matrix() const;

  bool contains(const QVector& v) const;
  bool contains(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;
  bool operator==(const Subspace& other) const;

 private:
  std::size_t ambient_;
  std::vector<QVector> basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const QMatrix& m);
Subspace column_space(const QMatrix& m);

/// Complement of `s` that is orthogonal for the bilinear form `gram`.
/// Throws GeometryError when gram is not symmetric positive definite.
Subspace orthogonal_complement(const Subspace& s, const QMatrix& gram);

/// Q^d / kernel, realised by explicit coset representatives ("section").
class QuotientModel {
 public:
  /// `section` must complement `kernel`; throws InternalConsistencyError if not.
  QuotientModel(Subspace kernel, std::vector<QVector> section);

  /// Section made of the standard basis vectors at the non-pivot positions
  /// of the kernel's echelon form, preceded by `preferred` vectors.
  static QuotientModel with_greedy_section(Subspace kernel,
                                           std::vector<QVector> preferred = {});

  std::size_t ambient_dim() const noexcept { return kernel_.ambient_dim(); }
  std::size_t dim() const noexcept { return section_.size(); }
  const Subspace& kernel() const noexcept { return kernel_; }
  const std::vector<QVector>& section() const noexcept { return section_; }

  /// Idempotent projector onto span(section) along the kernel.
  const QMatrix& projector() const noexcept { return projector_; }

  /// Coordinates of the class of v with respect to the section basis.
  QVector coordinates(const QVector& v) const;
  QVector lift(const QVector& coords) const;

  Eigen::MatrixXd coordinate_map_double() const { return coordinate_map_.to_double(); }

 private:
  Subspace kernel_;
  std::vector<QVector> section_;
  QMatrix projector_;
  QMatrix coordinate_map_;  // dim x ambient
};

// Float tower.

/// Minimiser of |m x - target|_2 via the normal equations; the minimum-norm
/// minimiser when m is rank deficient.
Eigen::VectorXd least_squares_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& target);

/// Rank from singular values above tol * max(1, largest singular value).
std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol = kDefaultTolerance);

/// Dimension of the null space, same threshold as numeric_rank.
std::size_t numeric_nullity(const Eigen::MatrixXd& m, double tol = kDefaultTolerance);

struct SkewNormalForm {
  Eigen::MatrixXd basis;        // P, orthogonal
  std::vector<double> lambdas;  // descending, all > tol
  std::vector<int> clusters;    // sizes (in 2-planes) of runs of equal lambdas
};

/// Orthogonal P with P^T omega P = blockdiag(l1 J, ..., ln J), J = [[0,1],[-1,0]].
/// Throws ContactDegeneracy when some l_i < tol.
SkewNormalForm skew_normal_form(const Eigen::MatrixXd& omega, double tol = kDefaultTolerance);

/// blockdiag(l1 J, ..., ln J).
Eigen::MatrixXd skew_block_form(std::span<const double> lambdas);

/// Relative gap under which two skew eigenvalues are treated as one cluster.
inline constexpr double kClusterTolerance = 1e-7;

std::string to_string(const Rational& q);

}  // namespace srcartan::linalg
