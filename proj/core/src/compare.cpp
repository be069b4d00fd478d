#include <algorithm>
#include <cmath>
#include <sstream>

#include "srcartan/compare.hpp"
#include "srcartan/errors.hpp"

namespace srcartan {

namespace {

std::string point_text(std::span<const double> p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
  out << ")";
  return out.str();
}

class Checker {
 public:
  Checker(PointComparison& pc, double tol) : pc_(pc), tol_(tol) {}

  void check(const std::string& name, double a, double b) {
    const double dev = std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    pc_.max_deviation = std::max(pc_.max_deviation, dev);
    if (!(dev <= tol_)) pc_.mismatches.push_back({name, a, b, dev});
  }

  void check_matrix(const std::string& name, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        check(name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", a(i, j), b(i, j));
      }
    }
  }

 private:
  PointComparison& pc_;
  double tol_;
};

Eigen::MatrixXd full_curvature(const Curvature& k, std::size_t dim, std::size_t i, std::size_t j) {
  if (i == j) return Eigen::MatrixXd::Zero(k.matrices.front().rows(), k.matrices.front().cols());
  const Eigen::MatrixXd& r = k.matrices[pair_index(std::min(i, j), std::max(i, j), dim)];
  return i < j ? r : Eigen::MatrixXd(-r);
}

void compare_point(PointComparison& pc, const Eigen::MatrixXd& jac, double tol) {
  const auto& ra = pc.a.reduction;
  const auto& rb = pc.b.reduction;
  const Eigen::Index d = ra.coframe.rows();
  const Eigen::Index m = d - 1;
  const auto dim = static_cast<std::size_t>(d);
  pc.h = rb.coframe * jac * ra.coframe.inverse();
  Checker c(pc, tol);

  for (std::size_t k = 1; k < ra.mu.size(); ++k) {
    c.check("mu[" + std::to_string(k + 1) + "]", ra.mu[k], rb.mu[k]);
  }
  c.check("contact_scale(lambda_1)", pc.h(m, m), 1.0);
  c.check_matrix("frame.mixed_top", pc.h.topRightCorner(m, 1), Eigen::MatrixXd::Zero(m, 1));
  c.check_matrix("frame.mixed_bottom", pc.h.bottomLeftCorner(1, m), Eigen::MatrixXd::Zero(1, m));
  const Eigen::MatrixXd top = pc.h.topLeftCorner(m, m);
  c.check_matrix("frame.orthogonal", top.transpose() * top, Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd omega = linalg::skew_block_form(ra.mu);
  c.check_matrix("frame.unitary", top * omega * top.transpose(), omega);

  const auto moved = sigma_action(pc.h, pc.b.connection.torsion);
  for (std::size_t k = 0; k < dim; ++k) {
    c.check_matrix("torsion[" + std::to_string(k + 1) + "]", pc.a.connection.torsion[k], moved[k]);
  }
  const Eigen::MatrixXd hinv = pc.h.inverse();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      Eigen::MatrixXd rb_moved = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t l = 0; l < dim; ++l) {
          if (k == l) continue;
          const double w = pc.h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) *
                           pc.h(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
          if (w != 0.0) rb_moved += w * full_curvature(pc.b.curvature, dim, k, l);
        }
      }
      const Eigen::MatrixXd ra_moved = pc.h * full_curvature(pc.a.curvature, dim, i, j) * hinv;
      c.check_matrix("curvature[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                     ra_moved, rb_moved);
    }
  }
}

}  // namespace

std::string EquivalenceVerdict::label() const {
  return consistent ? "consistent (necessary conditions)" : "inconsistent";
}

EquivalenceVerdict compare_structures(const SubRiemannianSpec& a, const SubRiemannianSpec& b,
                                      const std::vector<sym::Expr>& map,
                                      std::span<const std::vector<double>> points,
                                      const CompareOptions& options) {
  const std::size_t dim = a.chart.dimension();
  if (b.chart.dimension() != dim) {
    throw GeometryError("structures live on manifolds of different dimension");
  }
  if (map.size() != dim) {
    throw GeometryError("map has " + std::to_string(map.size()) + " components, expected " +
                        std::to_string(dim));
  }
  for (const auto& e : map) {
    if (sym::variable_bound(e) > dim) throw GeometryError("map uses variables outside the chart");
  }
  std::vector<std::vector<sym::Expr>> jac(dim, std::vector<sym::Expr>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) jac[i][j] = sym::diff(map[i], j);

  const double tol = options.reduction.tol;
  std::vector<std::vector<double>> mapped;
  std::vector<Eigen::MatrixXd> jacobians;
  for (const auto& p : points) {
    std::vector<double> q(dim);
    Eigen::MatrixXd j(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      q[r] = sym::eval(map[r], p);
      for (std::size_t s = 0; s < dim; ++s) {
        j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = sym::eval(jac[r][s], p);
      }
    }
    const double det = j.determinant();
    if (!(std::abs(det) > tol * std::max(1.0, j.cwiseAbs().maxCoeff()))) {
      throw GeometryError("map is not immersive at " + point_text(p));
    }
    mapped.push_back(std::move(q));
    jacobians.push_back(std::move(j));
  }

  const Reducer ra(adapted_coframe(a, points, tol), options.reduction);
  const Reducer rb(adapted_coframe(b, mapped, tol), options.reduction);
  if (ra.n() != rb.n()) throw GeometryError("structures have different rank");
  const ComplementModel model = invariant_complement(ra.n());

  EquivalenceVerdict out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    PointComparison pc;
    pc.point_a = points[k];
    pc.point_b = mapped[k];
    pc.jacobian_det = jacobians[k].determinant();
    pc.a = point_invariants(ra, model, points[k]);
    pc.b = point_invariants(rb, model, mapped[k]);
    compare_point(pc, jacobians[k], options.report_tol);
    if (!pc.mismatches.empty() && !out.failing_point) {
      out.failing_point = k;
      out.first_failure = pc.mismatches.front();
    }
    out.points.push_back(std::move(pc));
  }
  out.consistent = !out.failing_point.has_value();
  return out;
}

}  // namespace srcartan
