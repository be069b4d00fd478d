#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_group.hpp"
#include "srcartan/errors.hpp"
#include "srcartan/gstruct.hpp"

using namespace srcartan;
using testing_support::random_group_element;

namespace {

QMatrix unit_matrix(std::size_t dim, std::size_t r, std::size_t c) {
  QMatrix m(dim, dim);
  m(r, c) = 1;
  return m;
}

// S = e_s^* (x) X as the list of images S(e_t).
std::vector<QMatrix> elementary_map(int n, std::size_t s, const QMatrix& x) {
  const std::size_t dim = model_dim(n);
  std::vector<QMatrix> out(dim, QMatrix(dim, dim));
  out[s] = x;
  return out;
}

}  // namespace

TEST(ModelSpace, J0SquaresToMinusIdentity) {
  for (int n = 1; n <= 3; ++n) {
    const QMatrix j = j0(n);
    EXPECT_EQ(j * j, QMatrix::identity(2 * n) * Rational(-1));
    EXPECT_EQ(j(1, 0), 1);  // J0 e_1 = e_2
  }
}

TEST(LieAlgebra, Dimensions) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(build_lie_algebra(n, Level::kG).dim(),
              static_cast<std::size_t>(n * (2 * n - 1) + 2 * n + 1));
    EXPECT_EQ(build_lie_algebra(n, Level::kG1).dim(), static_cast<std::size_t>(n * n + 2 * n));
    EXPECT_EQ(build_lie_algebra(n, Level::kG2).dim(), static_cast<std::size_t>(n * n));
  }
}

TEST(LieAlgebra, NEqualsOneLevelG) {
  const auto g = build_lie_algebra(1, Level::kG);
  EXPECT_EQ(g.labels, (std::vector<std::string>{"I_1,2", "II_1", "II_2", "III"}));
}

TEST(LieAlgebra, NEqualsOneLevelG2IsSpannedByJ0) {
  const auto g2 = build_lie_algebra(1, Level::kG2);
  ASSERT_EQ(g2.dim(), 1u);
  QMatrix j(3, 3);
  j(1, 0) = 1;
  j(0, 1) = -1;
  EXPECT_EQ(g2.basis[0], j);
}

TEST(LieAlgebra, NEqualsTwoLevelG1) {
  const auto g1 = build_lie_algebra(2, Level::kG1);
  ASSERT_EQ(g1.dim(), 8u);
  int unitary = 0, translations = 0;
  for (const auto& l : g1.labels) {
    if (l.rfind("A_", 0) == 0) ++unitary;
    if (l.rfind("II_", 0) == 0) ++translations;
  }
  EXPECT_EQ(unitary, 4);
  EXPECT_EQ(translations, 4);
}

TEST(LieAlgebra, BlockShapes) {
  for (int n = 1; n <= 3; ++n) {
    const std::size_t v = 2 * static_cast<std::size_t>(n);
    const QMatrix j = j0(n);
    for (Level level : {Level::kG, Level::kG1, Level::kG2}) {
      for (const QMatrix& x : build_lie_algebra(n, level).basis) {
        for (std::size_t c = 0; c < v; ++c) EXPECT_EQ(x(v, c), 0);
        QMatrix a(v, v);
        for (std::size_t r = 0; r < v; ++r)
          for (std::size_t c = 0; c < v; ++c) a(r, c) = x(r, c);
        EXPECT_EQ(a.transpose(), a * Rational(-1));
        if (level != Level::kG) {
          EXPECT_EQ(a * j, j * a);
          EXPECT_EQ(x(v, v), 0);
        }
        if (level == Level::kG2) {
          for (std::size_t r = 0; r < v; ++r) EXPECT_EQ(x(r, v), 0);
        }
      }
    }
  }
}

TEST(Amap, ZeroMapsToZero) {
  const QHom2 t = amap(1, std::vector<QMatrix>(3, QMatrix(3, 3)));
  for (const auto& x : t.flat()) EXPECT_EQ(x, 0);
}

TEST(Amap, TranslationGenerator) {
  // S = e_s^* (x) II_k  ->  (e_s^* ^ v^*) (x) e_k
  const int n = 2;
  const std::size_t dim = model_dim(n), v = dim - 1;
  for (std::size_t s = 0; s < v; ++s) {
    for (std::size_t k = 0; k < v; ++k) {
      const QHom2 t = amap(n, elementary_map(n, s, unit_matrix(dim, k, v)));
      QHom2 expected(n);
      expected.set(k, s, v, 1);
      EXPECT_EQ(t.flat(), expected.flat());
    }
  }
}

TEST(Amap, RotationGenerator) {
  // S = e_s^* (x) I_pq  ->  (e_s^* ^ e_p^*) (x) e_q - (e_s^* ^ e_q^*) (x) e_p
  const int n = 2;
  const std::size_t dim = model_dim(n);
  const auto g = build_lie_algebra(n, Level::kG);
  std::size_t idx = 0;
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = p + 1; q < 4; ++q, ++idx) {
      for (std::size_t s = 0; s < dim; ++s) {
        const QHom2 t = amap(n, elementary_map(n, s, g.basis[idx]));
        QHom2 expected(n);
        if (s != p) expected.set(q, s, p, expected.get(q, s, p) + 1);
        if (s != q) expected.set(p, s, q, expected.get(p, s, q) - 1);
        EXPECT_EQ(t.flat(), expected.flat()) << "s=" << s << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(Amap, MatrixColumnsMatchElementaryImages) {
  const int n = 1;
  const auto g = build_lie_algebra(n, Level::kG1);
  const QMatrix m = amap_matrix(g);
  for (std::size_t s = 0; s < model_dim(n); ++s) {
    for (std::size_t a = 0; a < g.dim(); ++a) {
      EXPECT_EQ(m.column(s * g.dim() + a), amap(n, elementary_map(n, s, g.basis[a])).flat());
    }
  }
}

TEST(Amap, FloatMatchesExact) {
  std::mt19937 rng(8);
  const int n = 2;
  const std::size_t dim = model_dim(n);
  std::vector<QMatrix> s;
  std::vector<Eigen::MatrixXd> sd;
  for (std::size_t t = 0; t < dim; ++t) {
    s.push_back(oracle::random_matrix(rng, dim, dim));
    sd.push_back(s.back().to_double());
  }
  const QHom2 exact = amap(n, s);
  const auto approx = amap(n, sd);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        EXPECT_NEAR(approx[k](i, j), exact.get(k, i, j).get_d(), 1e-12);
}

TEST(OrbitSpace, DimensionsMatchNTimesTwoNMinusOne) {
  for (int n = 1; n <= 3; ++n) {
    const auto e = build_orbit_space(n, Level::kG);
    EXPECT_EQ(e.dim(), static_cast<std::size_t>(n * (2 * n - 1)));
    EXPECT_EQ(e.image.dim() + e.dim(), hom2_dim(n));
  }
}

TEST(OrbitSpace, NEqualsOneGenerator) {
  const auto e = build_orbit_space(1, Level::kG);
  ASSERT_EQ(e.dim(), 1u);
  EXPECT_EQ(e.labels[0], "e1^e2 (x) v");
}

TEST(OrbitSpace, NEqualsTwoRankOfAmap) {
  const QMatrix a = amap_matrix(build_lie_algebra(2, Level::kG));
  EXPECT_EQ(a.rows(), 50u);
  EXPECT_EQ(linalg::rref(a).rank, 44u);
  EXPECT_EQ(oracle::rank_mod_p(a), 44u);
  EXPECT_EQ(build_orbit_space(2, Level::kG).dim(), 6u);
}

TEST(OrbitSpace, G2ImageIsInjective) {
  for (int n = 1; n <= 3; ++n) {
    const auto g2 = build_lie_algebra(n, Level::kG2);
    const QMatrix a = amap_matrix(g2);
    EXPECT_EQ(linalg::kernel(a).dim(), 0u);
    EXPECT_EQ(linalg::rref(a).rank, model_dim(n) * g2.dim());
  }
}

TEST(OrbitSpace, LevelG1Summands) {
  const auto e = build_orbit_space(2, Level::kG1);
  ASSERT_GE(e.summands.size(), 2u);
  EXPECT_EQ(e.summands[0].name, "Hom(V'^V', V/V')");
  EXPECT_EQ(e.summands[0].end - e.summands[0].begin, 6u);
  EXPECT_EQ(e.summands[1].name, "Hom(V'^V/V', V/V')");
  EXPECT_EQ(e.summands[1].end - e.summands[1].begin, 4u);
  EXPECT_EQ(e.image.dim() + e.dim(), hom2_dim(2));
}

TEST(OrbitSpace, HorizontalTensorsLieInImage) {
  for (int n = 1; n <= 3; ++n) {
    const auto e = build_orbit_space(n, Level::kG);
    const std::size_t v = 2 * static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < v; ++i) {
      for (std::size_t j = 0; j < v; ++j) {
        for (std::size_t k = j + 1; k < v; ++k) {
          QHom2 t(n);
          t.set(i, j, k, 1);
          EXPECT_TRUE(e.image.contains(t.flat()));
        }
      }
    }
  }
}

TEST(Sigma, IdentityIsTrivial) {
  std::mt19937 rng(4);
  QHom2 t(1, std::vector<Rational>(9));
  for (auto& x : t.flat()) x = oracle::random_rational(rng);
  EXPECT_EQ(sigma_action(QMatrix::identity(3), t).flat(), t.flat());
}

TEST(Sigma, ImageOfAmapIsInvariant) {
  std::mt19937 rng(10);
  for (int n = 1; n <= 2; ++n) {
    const auto g = build_lie_algebra(n, Level::kG);
    const auto e = build_orbit_space(n, Level::kG);
    const QMatrix a = amap_matrix(g);
    for (int trial = 0; trial < 10; ++trial) {
      QVector coeffs(a.cols());
      for (auto& c : coeffs) c = oracle::random_rational(rng);
      const QHom2 t(n, a * coeffs);
      const auto h = random_group_element(rng, n, Level::kG);
      EXPECT_TRUE(e.image.contains(sigma_action(h.matrix, t).flat()));
    }
  }
}

TEST(Sigma, IsAnAction) {
  std::mt19937 rng(12);
  const int n = 2;
  QHom2 t(n);
  for (auto& x : t.flat()) x = oracle::random_rational(rng);
  const auto g = random_group_element(rng, n, Level::kG);
  const auto h = random_group_element(rng, n, Level::kG);
  // sigma(gh) = sigma(h) sigma(g)
  EXPECT_EQ(sigma_action(g.matrix * h.matrix, t).flat(),
            sigma_action(h.matrix, sigma_action(g.matrix, t)).flat());
}

TEST(Sigma, FloatMatchesExact) {
  std::mt19937 rng(13);
  const int n = 1;
  QHom2 t(n);
  for (auto& x : t.flat()) x = oracle::random_rational(rng);
  const auto g = random_group_element(rng, n, Level::kG);
  const QHom2 exact = sigma_action(g.matrix, t);
  Eigen::VectorXd flat(static_cast<Eigen::Index>(t.flat().size()));
  for (std::size_t i = 0; i < t.flat().size(); ++i) flat(static_cast<Eigen::Index>(i)) = t.flat()[i].get_d();
  const Eigen::VectorXd approx = flatten(n, sigma_action(g.matrix.to_double(), unflatten(n, flat)));
  for (std::size_t i = 0; i < exact.flat().size(); ++i)
    EXPECT_NEAR(approx(static_cast<Eigen::Index>(i)), exact.flat()[i].get_d(), 1e-12);
}

TEST(EAction, NEqualsOneScalesByCDetA) {
  std::mt19937 rng(21);
  const auto e = build_orbit_space(1, Level::kG);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_group_element(rng, 1, Level::kG);
    const Rational k = oracle::random_rational(rng);
    const QMatrix a = g.a();
    const Rational det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    EXPECT_EQ(e_action(e, g.matrix, {k}), (QVector{g.c() * det * k}));
  }
}

TEST(EAction, IdentityAndPureScaling) {
  const auto e = build_orbit_space(1, Level::kG);
  EXPECT_EQ(e_action(e, QMatrix::identity(3), {Rational(5)}), (QVector{Rational(5)}));
  const auto g = GroupElement::make(Level::kG, QMatrix::identity(2), {0, 0}, Rational(3));
  EXPECT_EQ(e_action(e, g.matrix, {Rational(2)}), (QVector{Rational(6)}));
}

TEST(EAction, TranslationAddsInteriorProduct) {
  const int n = 2;
  const auto e1 = build_orbit_space(n, Level::kG1);
  const std::size_t v = 4;
  // omega = e1^e2 + 3 e3^e4 on V', lifted as omega (x) v
  QMatrix omega(4, 4);
  omega(0, 1) = 1;
  omega(1, 0) = -1;
  omega(2, 3) = 3;
  omega(3, 2) = -3;
  QHom2 t(n);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j)
      if (omega(i, j) != 0) t.set(v, i, j, omega(i, j));
  const QVector coords = e1.quotient.coordinates(t.flat());
  const QVector b{1, -2, Rational(1, 2), 5};
  const auto g = GroupElement::make(Level::kG1, QMatrix::identity(4), b, 1);
  const QVector moved = e_action(e1, g.matrix, coords);

  const Summand& mixed = e1.summands[1];
  for (std::size_t c = mixed.begin; c < mixed.end; ++c) {
    // representative (e_i^* ^ v^*) (x) v; coefficient should be (i_b omega)(e_i)
    const QVector& rep = e1.quotient.section()[c];
    std::size_t idx = 0;
    while (rep[idx] == 0) ++idx;
    const std::size_t i = pair_at(idx / model_dim(n), model_dim(n)).first;
    Rational ib = 0;
    for (std::size_t a = 0; a < v; ++a) ib += b[a] * omega(a, i);
    EXPECT_EQ(moved[c] - coords[c], ib) << e1.labels[c];
  }
  const Summand& top = e1.summands[0];
  for (std::size_t c = top.begin; c < top.end; ++c) EXPECT_EQ(moved[c], coords[c]);
}

TEST(GroupElement, ValidatesLevel) {
  const QMatrix rot{{0, -1}, {1, 0}};
  EXPECT_NO_THROW(GroupElement::make(Level::kG2, rot, {0, 0}, 1));
  EXPECT_THROW(GroupElement::make(Level::kG2, rot, {1, 0}, 1), std::invalid_argument);
  EXPECT_THROW(GroupElement::make(Level::kG1, rot, {1, 0}, 2), std::invalid_argument);
  EXPECT_THROW(GroupElement::make(Level::kG, QMatrix{{2, 0}, {0, 1}}, {0, 0}, 1),
               std::invalid_argument);
  const QMatrix reflect{{1, 0}, {0, -1}};
  EXPECT_NO_THROW(GroupElement::make(Level::kG, reflect, {0, 0}, -2));
  EXPECT_THROW(GroupElement::make(Level::kG1, reflect, {0, 0}, 1), std::invalid_argument);
}

TEST(Cayley, ProducesUnitaryElements) {
  std::mt19937 rng(30);
  for (int n = 1; n <= 3; ++n) {
    const auto g = random_group_element(rng, n, Level::kG2);
    EXPECT_TRUE(in_group(g.matrix, Level::kG2));
    EXPECT_TRUE(in_group(g.matrix.to_double(), Level::kG2, 1e-12));
  }
}

TEST(Stabilizer, StandardFormGivesUn) {
  for (int n = 1; n <= 3; ++n) {
    const QMatrix j = j0(n);
    EXPECT_EQ(stabilizer_algebra(j).dim(), static_cast<std::size_t>(n * n));
    EXPECT_EQ(stabilizer_dimension(j.to_double(), 1e-9), static_cast<std::size_t>(n * n));
  }
}

TEST(Stabilizer, AnyTwoByTwoFormGivesDimensionOne) {
  for (int k : {1, 2, -3, 7}) {
    QMatrix omega{{0, k}, {-k, 0}};
    EXPECT_EQ(stabilizer_algebra(omega).dim(), 1u);
  }
}

TEST(Stabilizer, DistinctBlocksBreakU2) {
  QMatrix omega(4, 4);
  omega(0, 1) = 1;
  omega(1, 0) = -1;
  omega(2, 3) = 2;
  omega(3, 2) = -2;
  const auto stab = stabilizer_algebra(omega);
  EXPECT_EQ(stab.dim(), 2u);
  for (const QMatrix& x : stab.basis) {
    EXPECT_TRUE((x.transpose() * omega + omega * x).is_zero());
  }
  EXPECT_EQ(stabilizer_dimension(omega.to_double(), 1e-9), 2u);
}

TEST(Stabilizer, DegenerateThrows) {
  QMatrix omega(4, 4);
  omega(0, 1) = 1;
  omega(1, 0) = -1;
  EXPECT_THROW(stabilizer_algebra(omega), ContactDegeneracy);
}

TEST(Hom2Tensor, Antisymmetry) {
  QHom2 t(1);
  t.set(2, 1, 0, 5);
  EXPECT_EQ(t.get(2, 0, 1), -5);
  EXPECT_EQ(t.get(2, 1, 0), 5);
  EXPECT_EQ(t.get(2, 1, 1), 0);
  EXPECT_EQ(hom2_label(1, QHom2::index(1, 2, 0, 1)), "e1^e2 (x) v");
}
