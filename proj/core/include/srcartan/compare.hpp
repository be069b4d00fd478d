#pragma once

// Pointwise comparison of two sub-Riemannian structures under a candidate
// map phi: A -> B. With both structures reduced to their canonical coframes,
// the map relates them by phi^* theta''_B = h theta''_A for a matrix field h.
// A local equivalence forces h into G2 (h_NN = 1, no mixed blocks,
// orthogonal, commuting with the normal form), equal mu, and transports
// torsion and curvature:
//   T_A = sigma(h) T_B,   h R_A(E_i, E_j) h^{-1} = sum_kl h_ki h_lj R_B(E_k, E_l).
// Agreement at sample points is necessary-condition evidence only.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/connection.hpp"
#include "srcartan/reduction.hpp"

namespace srcartan {

struct CompareOptions {
  ReductionOptions reduction;
  double report_tol = 1e-6;  // relative
};

struct ComponentMismatch {
  std::string component;
  double value_a = 0.0;
  double value_b = 0.0;
  double deviation = 0.0;
};

struct PointComparison {
  std::vector<double> point_a;
  std::vector<double> point_b;
  double jacobian_det = 0.0;
  PointInvariants a;
  PointInvariants b;
  Eigen::MatrixXd h;
  double max_deviation = 0.0;
  std::vector<ComponentMismatch> mismatches;  // in check order
};

struct EquivalenceVerdict {
  std::vector<PointComparison> points;
  bool consistent = false;
  std::optional<std::size_t> failing_point;
  std::optional<ComponentMismatch> first_failure;

  /// "consistent (necessary conditions)" or "inconsistent".
  std::string label() const;
};

/// `map` gives the B-chart coordinates as expressions in A's chart.
/// Throws GeometryError when the map is not immersive at a point.
EquivalenceVerdict compare_structures(const SubRiemannianSpec& a, const SubRiemannianSpec& b,
                                      const std::vector<sym::Expr>& map,
                                      std::span<const std::vector<double>> points,
                                      const CompareOptions& options = {});

}  // namespace srcartan
