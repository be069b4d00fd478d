#include <random>

#include <gtest/gtest.h>

#include "examples.hpp"
#include "random_group.hpp"
#include "srcartan/connection.hpp"
#include "srcartan/errors.hpp"

using namespace srcartan;
using namespace testing_support;

namespace {

const std::vector<std::vector<double>> kPts3 = lattice(3, -1, 1, 3);

const ComplementModel& model(int n) {
  static const ComplementModel m1 = invariant_complement(1);
  static const ComplementModel m2 = invariant_complement(2);
  return n == 1 ? m1 : m2;
}

// Solvable group with d theta^2 = d theta^3 = theta^1 ^ theta^2.
SubRiemannianSpec solvable() {
  return coframe_spec({"x", "y", "z"}, "dz + exp(x)*dy", {"dx", "exp(x)*dy"});
}

}  // namespace

TEST(Complement, Dimensions) {
  for (int n = 1; n <= 2; ++n) {
    const auto& m = model(n);
    EXPECT_EQ(m.image.dim(), model_dim(n) * static_cast<std::size_t>(n * n));
    EXPECT_EQ(m.image.dim() + m.complement.dim(), hom2_dim(n));
  }
}

TEST(Complement, InfinitesimallyInvariant) {
  for (int n = 1; n <= 2; ++n) EXPECT_TRUE(is_infinitesimally_invariant(model(n))) << n;
}

TEST(Complement, InvariantUnderRandomG2Elements) {
  std::mt19937 rng(5);
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto g = random_group_element(rng, n, Level::kG2);
      EXPECT_TRUE(is_invariant_under(model(n), g.matrix));
    }
  }
}

TEST(Complement, NotInvariantUnderG1Shift) {
  // The complement is only required to be G2-invariant; a G1 element with
  // b != 0 moves it (sanity check that the test above can fail).
  const QMatrix g = group_matrix(QMatrix::identity(2), {Rational(1), Rational(0)}, 1);
  EXPECT_FALSE(is_invariant_under(model(1), g));
}

TEST(CanonicalConnection, HeisenbergIsTorsionOnly) {
  const Reducer red(adapted_coframe(heisenberg(), kPts3, 1e-9), {});
  const auto inv = point_invariants(red, model(1), std::vector<double>{0.2, 0.3, -0.1});
  EXPECT_LT(inv.connection.gamma.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(inv.connection.torsion[2](0, 1), 1.0, 1e-9);
  EXPECT_LT(inv.connection.residual, 1e-12);
  EXPECT_LT(inv.curvature.components.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CanonicalConnection, DecompositionReassembles) {
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  const auto& m = model(2);
  Eigen::VectorXd flat(static_cast<Eigen::Index>(hom2_dim(2)));
  for (auto& x : flat) x = nd(rng);
  const auto c = unflatten(2, flat);
  const Connection conn = canonical_connection(m, c);
  const Eigen::VectorXd back = flatten(2, amap(2, conn.matrices)) + flatten(2, conn.torsion);
  EXPECT_LT((back - flat).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(conn.residual, 1e-12);
  // Torsion is orthogonal to the image of A.
  for (const auto& v : m.image.basis()) {
    Eigen::VectorXd w(flat.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = v[static_cast<std::size_t>(i)].get_d();
    EXPECT_NEAR(w.dot(flatten(2, conn.torsion)), 0.0, 1e-10);
  }
}

TEST(CanonicalConnection, EquivariantUnderG2) {
  // Gamma(sigma(g^{-1}) c) = g^{-1} Gamma(g .) g up to conjugation rules; check
  // the torsion part transports as a tensor.
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  const auto& m = model(2);
  Eigen::VectorXd flat(static_cast<Eigen::Index>(hom2_dim(2)));
  for (auto& x : flat) x = nd(rng);
  const auto c = unflatten(2, flat);
  const auto g = random_group_element(rng, 2, Level::kG2).matrix.to_double();
  const Connection a = canonical_connection(m, c);
  const Connection b = canonical_connection(m, sigma_action(g, c));
  const auto moved = sigma_action(g, a.torsion);
  for (std::size_t k = 0; k < moved.size(); ++k) {
    EXPECT_LT((moved[k] - b.torsion[k]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Curvature, SolvableGroupMatchesConstantFormula) {
  const Reducer red(adapted_coframe(solvable(), kPts3, 1e-9), {});
  for (const auto& p : std::vector<std::vector<double>>{{0.0, 0.0, 0.0}, {0.5, -0.3, 0.2}}) {
    const auto inv = point_invariants(red, model(1), p);
    EXPECT_GT(inv.connection.gamma.cwiseAbs().maxCoeff(), 0.1);
    const Curvature k = constant_curvature(model(1), inv.connection, inv.reduction.c);
    EXPECT_LT((k.components - inv.curvature.components).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(k.projection_residual, 1e-12);
  }
}

TEST(Curvature, NonflatAgreesWithSymbolicPath) {
  const CoframeField cf = adapted_coframe(nonflat(), kPts3, 1e-9);
  const Reducer red(cf, {});
  const auto symb = symbolic_connection_n1(symbolic_reduction_n1(cf, kPts3, 1e-9), model(1));
  double largest = 0;
  for (const auto& p : kPts3) {
    const auto inv = point_invariants(red, model(1), p);
    for (std::size_t s = 0; s < 3; ++s) {
      EXPECT_NEAR(inv.connection.gamma(static_cast<Eigen::Index>(s), 0), sym::eval(symb.gamma[s], p),
                  1e-6);
    }
    for (std::size_t q = 0; q < 3; ++q) {
      const double want = sym::eval(symb.curvature_frame[q], p);
      largest = std::max(largest, std::abs(want));
      EXPECT_NEAR(inv.curvature.components(static_cast<Eigen::Index>(q), 0), want,
                  1e-3 * std::max(1.0, std::abs(want)));
    }
    EXPECT_LT(inv.curvature.projection_residual, 1e-3);
  }
  EXPECT_GT(largest, 0.1);
}

TEST(Curvature, ConvergesAtSecondOrder) {
  const CoframeField cf = adapted_coframe(nonflat(), kPts3, 1e-9);
  const auto symb = symbolic_connection_n1(symbolic_reduction_n1(cf, kPts3, 1e-9), model(1));
  const std::vector<double> p = {0.6, 0.2, -0.4};
  std::vector<double> errors;
  for (const double h : {0.02, 0.01, 0.005}) {
    const Reducer red(cf, {.tol = 1e-9, .fd_step = h});
    const auto inv = point_invariants(red, model(1), p);
    double e = 0;
    for (std::size_t q = 0; q < 3; ++q) {
      e = std::max(e, std::abs(inv.curvature.components(static_cast<Eigen::Index>(q), 0) -
                               sym::eval(symb.curvature_frame[q], p)));
    }
    errors.push_back(e);
  }
  EXPECT_GT(errors[0] / errors[1], 3.0);
  EXPECT_GT(errors[1] / errors[2], 3.0);
}
