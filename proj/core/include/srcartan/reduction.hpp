#pragma once

// Pointwise Cartan pipeline: adapted coframes, structure coefficients and the
// two reductions G -> G1 -> G2.
//
// Conventions. A coframe is stored as the matrix Theta whose row a holds the
// coefficients of theta^a in the coordinate basis dx^mu. Structure
// coefficients are full antisymmetric matrices C^k with
//   d theta^k = 1/2 sum_ij C^k_ij theta^i ^ theta^j,
// so C^k_ij = c^k_ij for i < j. A change of coframe theta' = M theta moves
// the coefficients by sigma(M^{-1}).
//
// The reduced coframe is theta'' = M theta with
//   M = [[A, b / l1], [0, 1 / l1]],
// A orthogonal bringing the top block of c into skew normal form, l1 the
// largest skew eigenvalue and b the shift that kills the mixed block.
// Derivatives of M are central differences on a lattice around the base
// point, with A continued smoothly from the base point's choice (see
// GaugeContext).

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/exact_linalg.hpp"
#include "srcartan/forms.hpp"
#include "srcartan/symexpr.hpp"

namespace srcartan {

/// Metric given as the gram matrix of a frame of D.
struct FrameMetric {
  std::vector<std::vector<sym::Expr>> frame;  // 2n vector fields, components along d/dx^mu
  std::vector<std::vector<sym::Expr>> gram;   // 2n x 2n, symmetric
};

/// Adapted coframe given directly: theta^1..theta^2n, with theta^{2n+1} = eta.
struct DeclaredCoframe {
  std::vector<sym::OneForm> forms;
};

struct SubRiemannianSpec {
  std::string name;
  sym::Chart chart;
  sym::OneForm eta;
  std::variant<FrameMetric, DeclaredCoframe> metric;

  /// Throws SchemaError when the chart dimension is not odd and >= 3 or the
  /// blocks have the wrong shape.
  int n() const;
  void validate_shape() const;
};

enum class Provenance { kRaw, kFirstReduced, kSecondReduced };

std::string_view to_string(Provenance p);

struct CoframeField {
  sym::Chart chart;
  std::vector<sym::OneForm> forms;  // theta^1 .. theta^{2n+1}
  Provenance provenance = Provenance::kRaw;

  int n() const { return static_cast<int>(forms.size() / 2); }
  std::size_t dim() const { return forms.size(); }
  Eigen::MatrixXd evaluate(std::span<const double> point) const;
};

/// Inverse of a square matrix of expressions by Gauss-Jordan elimination.
/// Pivots are chosen by their smallest magnitude over `points`. When no entry
/// of a column stays away from zero on all of them, falls back to adj / det;
/// throws GeometryError when the determinant itself gets small there.
std::vector<std::vector<sym::Expr>> symbolic_inverse(std::vector<std::vector<sym::Expr>> m,
                                                     std::span<const std::vector<double>> points,
                                                     double tol);

/// theta^{2n+1} = eta, theta^1..theta^2n orthonormal on D. In frame mode the
/// dual coframe of (frame, d/dx^k) is computed symbolically and rotated by
/// the Cholesky factor of the gram matrix. Checks at `points`: frame inside
/// ker eta, gram positive definite, coframe independent (GeometryError).
CoframeField adapted_coframe(const SubRiemannianSpec& spec,
                             std::span<const std::vector<double>> points, double tol);

/// Values of a coframe and its structure coefficients at one point.
struct RawPoint {
  std::vector<double> point;
  Eigen::MatrixXd theta;      // rows are forms
  Eigen::MatrixXd theta_inv;  // columns are the dual frame
  std::vector<Eigen::MatrixXd> c;
};

/// Evaluates a coframe with its exterior derivatives precomputed.
class CoframeEvaluator {
 public:
  explicit CoframeEvaluator(CoframeField field);

  const CoframeField& field() const noexcept { return field_; }
  const std::vector<sym::TwoForm>& differentials() const noexcept { return d_; }
  /// Throws EvaluationError outside the domain, GeometryError for a
  /// singular coframe.
  RawPoint evaluate(std::span<const double> point, double tol) const;

 private:
  CoframeField field_;
  std::vector<sym::TwoForm> d_;
};

struct StructureCoefficients {
  std::vector<double> point;
  std::vector<Eigen::MatrixXd> c;
};

StructureCoefficients structure_coefficients(const CoframeField& cf, std::span<const double> point,
                                             double tol = linalg::kDefaultTolerance);

/// Coefficients of theta' = M theta from those of theta, given the
/// coordinate derivatives dM[mu] = dM / dx^mu.
std::vector<Eigen::MatrixXd> transform_coefficients(const RawPoint& raw, const Eigen::MatrixXd& m,
                                                    const std::vector<Eigen::MatrixXd>& dm);

struct ReductionOptions {
  double tol = linalg::kDefaultTolerance;
  double fd_step = 1e-4;
};

struct FirstReduction {
  Eigen::MatrixXd rotation;  // A, 2n x 2n orthogonal
  std::vector<double> lambdas;
  std::vector<double> mu;
  std::vector<int> clusters;
  Eigen::MatrixXd coframe;   // theta' = diag(A, 1 / l1) theta
};

struct SecondReduction {
  Eigen::VectorXd b;
  Eigen::MatrixXd group;    // M
  Eigen::MatrixXd coframe;  // theta'' = M theta
};

struct ReductionRecord {
  std::vector<double> point;
  std::vector<double> lambdas;
  std::vector<double> mu;
  std::vector<int> clusters;
  Eigen::VectorXd b_shift;
  Eigen::MatrixXd group;
  Eigen::MatrixXd coframe;
  std::vector<Eigen::MatrixXd> c;  // structure coefficients of theta''
  std::size_t stabilizer_dim = 0;
  double top_block_violation = 0.0;
  double mixed_block_violation = 0.0;

  /// Vector dual to theta''^{2n+1}, in coordinates.
  Eigen::VectorXd contact_dual() const;
};

class Reducer;

/// Gauge-consistent evaluation around one base point. Lattice points are
/// addressed by integer offsets (multiples of the finite-difference step) so
/// repeated visits hit the cache exactly. The rotation A at every lattice
/// point is the one closest to the base point's rotation within the
/// stabilizer of the skew normal form, which makes A smooth on the stencil.
class GaugeContext {
 public:
  GaugeContext(const Reducer& reducer, std::vector<double> base);

  struct Gauged {
    Eigen::MatrixXd group;    // M
    Eigen::MatrixXd coframe;  // M Theta
    std::vector<Eigen::MatrixXd> c;
    std::vector<double> lambdas;
    std::vector<int> clusters;
    Eigen::VectorXd b;
  };

  using Offset = std::vector<int>;

  const std::vector<double>& base() const noexcept { return base_; }
  double step() const noexcept;
  std::vector<double> point(const Offset& off) const;
  const Eigen::MatrixXd& reference() const noexcept { return reference_; }

  const RawPoint& raw(const Offset& off);
  /// M at a lattice point (needs first derivatives of 1/l1 there).
  Eigen::MatrixXd group(const Offset& off);
  /// Full reduced data at a lattice point (needs M on its stencil).
  const Gauged& reduced(const Offset& off);

 private:
  struct Normal {
    Eigen::MatrixXd rotation;
    std::vector<double> lambdas;
    std::vector<int> clusters;
  };
  const Normal& normal(const Offset& off);
  Eigen::VectorXd shift(const Offset& off);

  const Reducer& reducer_;
  std::vector<double> base_;
  Eigen::MatrixXd reference_;
  std::map<Offset, RawPoint> raw_;
  std::map<Offset, Normal> normal_;
  std::map<Offset, Eigen::MatrixXd> group_;
  std::map<Offset, Gauged> reduced_;
};

class Reducer {
 public:
  Reducer(CoframeField raw, ReductionOptions options);

  int n() const noexcept { return evaluator_.field().n(); }
  std::size_t dim() const noexcept { return evaluator_.field().dim(); }
  const ReductionOptions& options() const noexcept { return options_; }
  const CoframeEvaluator& evaluator() const noexcept { return evaluator_; }

  RawPoint raw(std::span<const double> point) const;

  /// Throws ContactDegeneracy when the top block is degenerate.
  FirstReduction first_reduction(std::span<const double> point) const;
  SecondReduction second_reduction(std::span<const double> point) const;
  ReductionRecord reduce(std::span<const double> point) const;
  /// Same, at the context's base point, sharing its cache.
  ReductionRecord reduce(GaugeContext& ctx) const;

 private:
  CoframeEvaluator evaluator_;
  ReductionOptions options_;
};

/// Reeb field of a contact form at a point: eta(xi) = 1, i_xi d eta = 0.
Eigen::VectorXd reeb_field(const sym::OneForm& eta, std::span<const double> point, double tol);

/// Reduction for n = 1 carried out symbolically: l1 = |d theta^3(E1, E2)|,
/// theta'3 = theta^3 / l1 (theta^2 flipped where d theta^3(E1, E2) < 0,
/// matching the numeric path) and b = (-m2, m1). Used to cross-check the
/// finite-difference pipeline.
struct SymbolicReductionN1 {
  sym::Expr lambda;
  std::vector<sym::OneForm> coframe;         // theta''
  std::vector<std::vector<sym::Expr>> frame; // frame[i][mu], dual to theta''
  std::vector<sym::Expr> c;                  // flat structure coefficients of theta''
};

SymbolicReductionN1 symbolic_reduction_n1(const CoframeField& cf,
                                          std::span<const std::vector<double>> points, double tol);

/// w(u, v) for a two-form and two vector fields.
sym::Expr pair(const sym::TwoForm& w, const std::vector<sym::Expr>& u,
               const std::vector<sym::Expr>& v);

}  // namespace srcartan
