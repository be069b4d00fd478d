#include <cmath>

#include <gtest/gtest.h>

#include "examples.hpp"
#include "srcartan/errors.hpp"
#include "srcartan/gstruct.hpp"
#include "srcartan/reduction.hpp"

using namespace srcartan;
using namespace testing_support;

namespace {

const std::vector<std::vector<double>> kPts3 = lattice(3, -1, 1, 3);
const std::vector<std::vector<double>> kPts5 = lattice(5, -1, 1, 2);

double max_abs(const std::vector<Eigen::MatrixXd>& c) {
  double m = 0;
  for (const auto& x : c) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

// Only c^k_ij entries listed are nonzero, with the given values.
void expect_coefficients(const std::vector<Eigen::MatrixXd>& c,
                         std::vector<std::tuple<int, int, int, double>> nonzero, double tol) {
  std::vector<Eigen::MatrixXd> expected(c.size(), Eigen::MatrixXd::Zero(c[0].rows(), c[0].cols()));
  for (auto [k, i, j, v] : nonzero) {
    expected[k](i, j) = v;
    expected[k](j, i) = -v;
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_LT((c[k] - expected[k]).cwiseAbs().maxCoeff(), tol) << "k=" << k << "\n" << c[k];
  }
}

}  // namespace

TEST(AdaptedCoframe, HeisenbergRawCoefficients) {
  const CoframeField cf = adapted_coframe(heisenberg(), kPts3, 1e-9);
  ASSERT_EQ(cf.dim(), 3u);
  for (const auto& p : kPts3) {
    expect_coefficients(structure_coefficients(cf, p).c, {{2, 0, 1, 1.0}}, 1e-13);
  }
}

TEST(AdaptedCoframe, R5UnitRawCoefficients) {
  const CoframeField cf = adapted_coframe(r5("1", "1", "1", "1"), kPts5, 1e-9);
  for (const auto& p : kPts5) {
    expect_coefficients(structure_coefficients(cf, p).c, {{4, 0, 1, 1.0}, {4, 2, 3, 1.0}}, 1e-13);
  }
}

TEST(AdaptedCoframe, CholeskyOfDiagonalGram) {
  const CoframeField cf = adapted_coframe(r5("4", "9", "1", "1/4"), kPts5, 1e-9);
  EXPECT_EQ(cf.forms[0].coeffs[0], sym::Expr(2L));
  EXPECT_EQ(cf.forms[1].coeffs[1], sym::Expr(3L));
  EXPECT_EQ(cf.forms[3].coeffs[3], sym::Expr(Rational(1, 2)));
}

TEST(AdaptedCoframe, OrthonormalOnDistribution) {
  // Non-diagonal gram: theta restricted to D must give the gram back.
  const auto spec = frame_spec({"x", "y", "z"}, "dz + x*dy", {{"1", "0", "0"}, {"0", "1", "-x"}},
                               {{"2", "x"}, {"x", "3"}});
  const CoframeField cf = adapted_coframe(spec, kPts3, 1e-9);
  for (const auto& p : kPts3) {
    Eigen::MatrixXd frame(3, 2);
    frame << 1, 0, 0, 1, 0, -p[0];
    const Eigen::MatrixXd th = cf.evaluate(p).topRows(2) * frame;
    Eigen::Matrix2d g;
    g << 2, p[0], p[0], 3;
    EXPECT_LT((th.transpose() * th - g).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((cf.evaluate(p).row(2) * frame).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(AdaptedCoframe, RejectsIndefiniteMetric) {
  const auto spec = frame_spec({"x", "y", "z"}, "dz + x*dy", {{"1", "0", "0"}, {"0", "1", "-x"}},
                               {{"1", "0"}, {"0", "-1"}});
  EXPECT_THROW(adapted_coframe(spec, kPts3, 1e-9), GeometryError);
}

TEST(AdaptedCoframe, RejectsFrameOutsideDistribution) {
  const auto spec = frame_spec({"x", "y", "z"}, "dz + x*dy", {{"1", "0", "0"}, {"0", "1", "0"}},
                               {{"1", "0"}, {"0", "1"}});
  EXPECT_THROW(adapted_coframe(spec, kPts3, 1e-9), GeometryError);
}

TEST(AdaptedCoframe, RejectsWrongShapes) {
  auto spec = heisenberg();
  std::get<FrameMetric>(spec.metric).gram.pop_back();
  EXPECT_THROW(adapted_coframe(spec, kPts3, 1e-9), SchemaError);
  SubRiemannianSpec even;
  even.chart = sym::Chart({"x", "y"});
  EXPECT_THROW(even.n(), SchemaError);
}

TEST(SymbolicInverse, MatchesNumericInverse) {
  const sym::Chart chart({"x", "y", "z"});
  std::vector<std::vector<sym::Expr>> m = {
      parse_all({"0", "1", "x"}, chart), parse_all({"1 + y^2", "0", "z"}, chart),
      parse_all({"x", "2", "1"}, chart)};
  const std::vector<std::vector<double>> pts = {{0.3, 0.1, -0.2}, {0.5, -0.4, 0.9}};
  const auto inv = symbolic_inverse(m, pts, 1e-9);
  for (const auto& p : pts) {
    Eigen::Matrix3d a, b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a(i, j) = sym::eval(m[i][j], p);
        b(i, j) = sym::eval(inv[i][j], p);
      }
    EXPECT_LT((a * b - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SymbolicInverse, SingularAtSamplePointThrows) {
  const sym::Chart chart({"x", "y", "z"});
  std::vector<std::vector<sym::Expr>> m = {parse_all({"x", "0", "0"}, chart),
                                           parse_all({"0", "1", "0"}, chart),
                                           parse_all({"0", "0", "1"}, chart)};
  EXPECT_THROW(symbolic_inverse(m, kPts3, 1e-9), GeometryError);
}

TEST(SymbolicInverse, NoCommonPivotFallsBackToAdjugate) {
  // Column 2 entries vanish at x = -1 and x = 0 respectively; det = e^{2x}.
  const sym::Chart chart({"x", "y", "z"});
  std::vector<std::vector<sym::Expr>> m = {parse_all({"1", "y*(1 + x)", "y"}, chart),
                                           parse_all({"0", "exp(x)*(1 + x)", "exp(x)"}, chart),
                                           parse_all({"0", "x*exp(x)", "exp(x)"}, chart)};
  const auto inv = symbolic_inverse(m, kPts3, 1e-9);
  for (const auto& p : kPts3) {
    Eigen::Matrix3d a, b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a(i, j) = sym::eval(m[i][j], p);
        b(i, j) = sym::eval(inv[i][j], p);
      }
    EXPECT_LT((a * b - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TransformCoefficients, AgreesWithDirectEvaluation) {
  // theta' = M(x) theta with M symbolic: compare against structure
  // coefficients of the transformed coframe computed symbolically.
  const CoframeField cf = adapted_coframe(heisenberg(), kPts3, 1e-9);
  const sym::Chart& chart = cf.chart;
  const std::vector<std::vector<std::string>> msrc = {
      {"cos(y)", "sin(y)", "x"}, {"-sin(y)", "cos(y)", "z^2"}, {"0", "0", "2 + x*y"}};
  std::vector<std::vector<sym::Expr>> msym;
  for (const auto& r : msrc) msym.push_back(parse_all(r, chart));
  CoframeField moved = cf;
  for (std::size_t a = 0; a < 3; ++a) {
    sym::OneForm f(3);
    for (std::size_t b = 0; b < 3; ++b) f = f + msym[a][b] * cf.forms[b];
    moved.forms[a] = f;
  }
  const std::vector<double> p = {0.2, -0.3, 0.7};
  const RawPoint raw = CoframeEvaluator(cf).evaluate(p, 1e-9);
  Eigen::Matrix3d m;
  std::vector<Eigen::MatrixXd> dm(3, Eigen::MatrixXd::Zero(3, 3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      m(a, b) = sym::eval(msym[a][b], p);
      for (std::size_t mu = 0; mu < 3; ++mu) dm[mu](a, b) = sym::eval(sym::diff(msym[a][b], mu), p);
    }
  const auto got = transform_coefficients(raw, m, dm);
  const auto want = structure_coefficients(moved, p).c;
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LT((got[k] - want[k]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FirstReduction, ScaledContactForm) {
  const auto spec = coframe_spec({"x", "y", "z"}, "3*dz + 3*x*dy", {"dx", "dy"});
  const Reducer red(adapted_coframe(spec, kPts3, 1e-9), {});
  const auto first = red.first_reduction(std::vector<double>{0.1, 0.2, 0.3});
  ASSERT_EQ(first.lambdas.size(), 1u);
  EXPECT_NEAR(first.lambdas[0], 3.0, 1e-12);
  const ReductionRecord rec = red.reduce(std::vector<double>{0.1, 0.2, 0.3});
  expect_coefficients(rec.c, {{2, 0, 1, 1.0}}, 1e-8);
}

TEST(FirstReduction, NegativeOrientationFlipsSecondVector) {
  const auto spec = frame_spec({"x", "y", "z"}, "dz - x*dy", {{"1", "0", "0"}, {"0", "1", "x"}},
                               {{"1", "0"}, {"0", "1"}});
  const Reducer red(adapted_coframe(spec, kPts3, 1e-9), {});
  const auto first = red.first_reduction(std::vector<double>{0.0, 0.0, 0.0});
  EXPECT_LT((first.rotation - Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix()).norm(), 1e-14);
}

TEST(FirstReduction, R5SkewEigenvalues) {
  const Reducer red(adapted_coframe(r5("1", "1", "1", "4"), kPts5, 1e-9), {});
  for (const auto& p : kPts5) {
    const auto first = red.first_reduction(p);
    ASSERT_EQ(first.mu.size(), 2u);
    EXPECT_NEAR(first.lambdas[0], 1.0, 1e-12);
    EXPECT_NEAR(first.mu[1], 0.5, 1e-12);
    EXPECT_EQ(first.clusters, (std::vector<int>{1, 1}));
  }
}

TEST(FirstReduction, DegenerateContactFormThrows) {
  const auto spec = coframe_spec({"x", "y", "z"}, "dz", {"dx", "dy"});
  const Reducer red(adapted_coframe(spec, kPts3, 1e-9), {});
  EXPECT_THROW(red.first_reduction(std::vector<double>{0.0, 0.0, 0.0}), ContactDegeneracy);
  EXPECT_THROW(red.reduce(std::vector<double>{0.0, 0.0, 0.0}), ContactDegeneracy);
}

TEST(SecondReduction, ShiftedHeisenbergCoframe) {
  const auto spec = coframe_spec({"x", "y", "z"}, "dz + x*dy", {"dx + dz + x*dy", "dy"});
  const Reducer red(adapted_coframe(spec, kPts3, 1e-9), {});
  const std::vector<double> p = {0.4, -0.1, 0.2};
  const auto second = red.second_reduction(p);
  EXPECT_NEAR(second.b(0), -1.0, 1e-9);
  EXPECT_NEAR(second.b(1), 0.0, 1e-9);
  // theta''^1 = dx.
  EXPECT_LT((second.coframe.row(0) - Eigen::RowVector3d(1, 0, 0)).cwiseAbs().maxCoeff(), 1e-9);
  expect_coefficients(red.reduce(p).c, {{2, 0, 1, 1.0}}, 1e-8);
}

TEST(Reduce, SliceConditionsAndStabilizer) {
  const Reducer unit(adapted_coframe(r5("1", "1", "1", "1"), kPts5, 1e-9), {});
  const Reducer split(adapted_coframe(r5("1", "1", "1", "4"), kPts5, 1e-9), {});
  for (const auto& p : kPts5) {
    const auto a = unit.reduce(p);
    EXPECT_LT(a.top_block_violation, 1e-9);
    EXPECT_LT(a.mixed_block_violation, 1e-9);
    EXPECT_EQ(a.stabilizer_dim, 4u);
    const auto b = split.reduce(p);
    EXPECT_LT(b.top_block_violation, 1e-9);
    EXPECT_EQ(b.stabilizer_dim, 2u);
    const Eigen::MatrixXd a4 = b.group.topLeftCorner(4, 4);
    EXPECT_LT((a4 * a4.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reduce, NonflatSliceMembership) {
  const Reducer red(adapted_coframe(nonflat(), kPts3, 1e-9), {});
  for (const auto& p : kPts3) {
    const auto rec = red.reduce(p);
    EXPECT_LT(rec.top_block_violation, 1e-9);
    EXPECT_LT(rec.mixed_block_violation, 1e-7);
    EXPECT_NEAR(rec.c[2](0, 1), 1.0, 1e-9);
  }
}

TEST(Reduce, GroupElementHasBlockShape) {
  const Reducer red(adapted_coframe(nonflat(), kPts3, 1e-9), {});
  const auto rec = red.reduce(std::vector<double>{0.5, 0.1, -0.3});
  const Eigen::MatrixXd a = rec.group.topLeftCorner(2, 2);
  EXPECT_LT((a * a.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(rec.group.row(2).head(2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Reeb, HeisenbergAndR5) {
  const auto h = heisenberg();
  const auto xi = reeb_field(h.eta, std::vector<double>{0.3, 0.4, 0.5}, 1e-9);
  EXPECT_LT((xi - Eigen::Vector3d(0, 0, 1)).cwiseAbs().maxCoeff(), 1e-14);
  const auto r = r5("1", "1", "1", "1");
  Eigen::VectorXd e5 = Eigen::VectorXd::Zero(5);
  e5(4) = 1;
  EXPECT_LT((reeb_field(r.eta, std::vector<double>(5, 0.3), 1e-9) - e5).cwiseAbs().maxCoeff(),
            1e-14);
  const auto flat = coframe_spec({"x", "y", "z"}, "dz", {"dx", "dy"});
  EXPECT_THROW(reeb_field(flat.eta, std::vector<double>{0, 0, 0}, 1e-9), ContactDegeneracy);
}

TEST(Reeb, ContactDualMatchesForUnitLambda) {
  const Reducer red(adapted_coframe(heisenberg(), kPts3, 1e-9), {});
  for (const auto& p : kPts3) {
    const auto rec = red.reduce(p);
    EXPECT_LT((rec.contact_dual() - reeb_field(heisenberg().eta, p, 1e-9)).cwiseAbs().maxCoeff(),
              1e-9);
  }
}

TEST(SymbolicN1, MatchesNumericCoframe) {
  for (const auto& spec :
       {nonflat(), frame_spec({"x", "y", "z"}, "dz - x*dy", {{"1", "0", "0"}, {"0", "1", "x"}},
                              {{"1 + y^2", "0"}, {"0", "2"}})}) {
    const CoframeField cf = adapted_coframe(spec, kPts3, 1e-9);
    const Reducer red(cf, {});
    const auto symb = symbolic_reduction_n1(cf, kPts3, 1e-9);
    for (const auto& p : kPts3) {
      const auto rec = red.reduce(p);
      Eigen::Matrix3d th;
      for (int a = 0; a < 3; ++a) th.row(a) = sym::evaluate(symb.coframe[a], p).transpose();
      EXPECT_LT((th - rec.coframe).cwiseAbs().maxCoeff(), 1e-7);
      for (std::size_t f = 0; f < symb.c.size(); ++f) {
        const auto [pi, k] = std::pair{f / 3, f % 3};
        const auto [i, j] = pair_at(pi, 3);
        EXPECT_NEAR(sym::eval(symb.c[f], p), rec.c[k](i, j), 1e-6);
      }
    }
  }
}

TEST(Reduce, NoNonzeroCoefficientsOutsideSlice) {
  const Reducer red(adapted_coframe(heisenberg("4"), kPts3, 1e-9), {});
  const auto rec = red.reduce(std::vector<double>{0.0, 0.0, 0.0});
  EXPECT_NEAR(rec.lambdas[0], 0.25, 1e-12);
  expect_coefficients(rec.c, {{2, 0, 1, 1.0}}, 1e-9);
  EXPECT_NEAR(max_abs(rec.c), 1.0, 1e-9);
}
