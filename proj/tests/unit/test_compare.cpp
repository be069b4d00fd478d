#include <gtest/gtest.h>

#include "examples.hpp"
#include "srcartan/compare.hpp"
#include "srcartan/errors.hpp"

using namespace srcartan;
using namespace testing_support;

namespace {

const std::vector<std::vector<double>> kPts = lattice(3, -1, 1, 2);

std::vector<sym::Expr> map_of(const SubRiemannianSpec& a, const std::vector<std::string>& src) {
  return parse_all(src, a.chart);
}

SubRiemannianSpec rotated_heisenberg() {
  return coframe_spec({"u", "v", "w"}, "dw + 1/2*u*dv - 1/2*v*du", {"du", "dv"});
}

}  // namespace

TEST(Compare, IdentityIsConsistent) {
  const auto a = heisenberg();
  const auto v = compare_structures(a, a, map_of(a, {"x", "y", "z"}), kPts);
  EXPECT_TRUE(v.consistent);
  EXPECT_EQ(v.points.size(), kPts.size());
  EXPECT_EQ(v.label(), "consistent (necessary conditions)");
  EXPECT_LT(v.points.front().max_deviation, 1e-9);
}

TEST(Compare, TranslatedChartIsConsistent) {
  const auto a = heisenberg();
  const auto v = compare_structures(a, a, map_of(a, {"x + 1", "y", "z - y"}), kPts);
  EXPECT_TRUE(v.consistent) << (v.first_failure ? v.first_failure->component : "");
}

TEST(Compare, RotatedPresentationIsConsistent) {
  const auto a = heisenberg();
  const auto v = compare_structures(a, rotated_heisenberg(),
                                    map_of(a, {"(3*x - 4*y)/5", "(4*x + 3*y)/5", "z + x*y/2"}), kPts);
  EXPECT_TRUE(v.consistent) << (v.first_failure ? v.first_failure->component : "");
  for (const auto& pc : v.points) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_LT((pc.a.connection.torsion[k] - pc.b.connection.torsion[k]).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Compare, ScaledMetricIsInconsistentOnContactScale) {
  const auto a = heisenberg();
  const auto v = compare_structures(a, heisenberg("4"), map_of(a, {"x", "y", "z"}), kPts);
  EXPECT_FALSE(v.consistent);
  ASSERT_TRUE(v.first_failure.has_value());
  EXPECT_EQ(*v.failing_point, 0u);
  EXPECT_EQ(v.first_failure->component, "contact_scale(lambda_1)");
  EXPECT_NEAR(v.first_failure->value_a, 4.0, 1e-9);
  const auto& pc = v.points.front();
  EXPECT_NEAR(pc.a.reduction.lambdas.front(), 1.0, 1e-9);
  EXPECT_NEAR(pc.b.reduction.lambdas.front(), 0.25, 1e-9);
  EXPECT_NEAR(pc.h(0, 0) * pc.h(0, 0) + pc.h(1, 0) * pc.h(1, 0), 4.0, 1e-9);
  // Both reduce to the same canonical torsion; only h leaves G2.
  EXPECT_LT((pc.a.connection.torsion[2] - pc.b.connection.torsion[2]).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Compare, ShearThatBreaksMetricIsInconsistent) {
  // (x, y, z) -> (x, 2y, 2z) preserves D but doubles g on d/dy.
  const auto a = heisenberg();
  const auto v = compare_structures(a, a, map_of(a, {"x", "2*y", "2*z"}), kPts);
  EXPECT_FALSE(v.consistent);
}

TEST(Compare, R5DistinctMuIsInconsistent) {
  const auto a = r5("1", "1", "1", "1");
  const auto b = r5("1", "1", "1", "4");
  const auto pts = lattice(5, -0.5, 0.5, 2);
  const auto v = compare_structures(a, b, map_of(a, {"x1", "y1", "x2", "y2", "z"}), pts);
  EXPECT_FALSE(v.consistent);
  EXPECT_EQ(v.first_failure->component, "mu[2]");
  EXPECT_NEAR(v.first_failure->value_b, 0.5, 1e-9);
}

TEST(Compare, NonflatAgainstItselfUnderTranslationInY) {
  // y -> y + 1 is an isometry of dx^2 + (1 + x^2) dy^2 on ker(dz + x dy).
  const auto a = nonflat();
  const auto v = compare_structures(a, a, map_of(a, {"x", "y + 1", "z"}), kPts);
  EXPECT_TRUE(v.consistent) << (v.first_failure ? v.first_failure->component : "");
  const auto w = compare_structures(a, a, map_of(a, {"x + 1", "y", "z - y"}), kPts);
  EXPECT_FALSE(w.consistent);
}

TEST(Compare, NonImmersiveMapThrows) {
  const auto a = heisenberg();
  EXPECT_THROW(compare_structures(a, a, map_of(a, {"x", "y", "0"}), kPts), GeometryError);
  EXPECT_THROW(compare_structures(a, a, map_of(a, {"x", "y"}), kPts), GeometryError);
}
