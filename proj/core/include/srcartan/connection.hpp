#pragma once

// Canonical connection of the reduced coframe. Structure coefficients split
// as c = A(Gamma) + T with Gamma in Hom(V, g2) and T in a G2-invariant
// complement C of A(Hom(V, g2)); the connection form is
//   omega = -sum_s Gamma(e_s) theta''^s
// and its curvature R = d omega + omega ^ omega.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/gstruct.hpp"
#include "srcartan/reduction.hpp"

namespace srcartan {

struct ComplementModel {
  int n = 0;
  LieAlgebraModel algebra;  // g2
  Subspace image;           // A(Hom(V, g2))
  Subspace complement;      // orthogonal complement, G2-invariant
  /// Rows s * dim(g2) + a give Gamma(e_s) coordinates; rows after that give
  /// complement coordinates. Inverse of [A | complement basis].
  QMatrix splitting;
  Eigen::MatrixXd splitting_d;

  std::size_t gamma_dim() const noexcept { return model_dim(n) * algebra.dim(); }
};

ComplementModel invariant_complement(int n);

/// X . C inside C for every generator X of g2 (exact).
bool is_infinitesimally_invariant(const ComplementModel& model);
/// sigma(g) C = C for a group element g (exact).
bool is_invariant_under(const ComplementModel& model, const QMatrix& g);

struct Connection {
  Eigen::MatrixXd gamma;                 // gamma(s, a): coordinate of Gamma(e_s) on basis a
  std::vector<Eigen::MatrixXd> matrices; // Gamma(e_s) as (2n+1) x (2n+1) matrices
  std::vector<Eigen::MatrixXd> torsion;  // T^k, full antisymmetric
  /// |c - A(Gamma) - T|, should be rounding only.
  double residual = 0.0;
};

Connection canonical_connection(const ComplementModel& model, const std::vector<Eigen::MatrixXd>& c);

struct Curvature {
  /// components(pair_index(i, j), a): coordinate of R(E_i, E_j) on basis a.
  Eigen::MatrixXd components;
  std::vector<Eigen::MatrixXd> matrices;  // R(E_i, E_j) in gl(V), pair-indexed
  /// Largest distance of R(E_i, E_j) from g2; nonzero only through
  /// discretisation error.
  double projection_residual = 0.0;
};

/// Curvature at the context's base point from finite differences of omega.
Curvature curvature(GaugeContext& ctx, const ComplementModel& model);

/// Curvature when Gamma and c are constant in the frame (left-invariant
/// coframes): R_ij = -sum_s Gamma_s c^s_ij + [Gamma_i, Gamma_j].
Curvature constant_curvature(const ComplementModel& model, const Connection& conn,
                             const std::vector<Eigen::MatrixXd>& c);

/// Everything computed at one point.
struct PointInvariants {
  ReductionRecord reduction;
  Connection connection;
  Curvature curvature;
};

PointInvariants point_invariants(const Reducer& reducer, const ComplementModel& model,
                                 std::span<const double> point);

/// Symbolic connection and curvature for n = 1 (g2 is one-dimensional and
/// abelian, so R = d omega).
struct SymbolicConnectionN1 {
  std::vector<sym::Expr> gamma;            // coefficient of Gamma(e_s) on the g2 generator
  sym::TwoForm curvature;                  // in coordinates
  std::vector<sym::Expr> curvature_frame;  // R(E_i, E_j), pair-indexed
};

SymbolicConnectionN1 symbolic_connection_n1(const SymbolicReductionN1& red,
                                            const ComplementModel& model);

}  // namespace srcartan
