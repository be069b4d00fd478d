#include <algorithm>
#include <cmath>
#include <sstream>

#include "srcartan/errors.hpp"
#include "srcartan/gstruct.hpp"
#include "srcartan/reduction.hpp"

namespace srcartan {

namespace {

GaugeContext::Offset shifted(GaugeContext::Offset off, std::size_t axis, int by) {
  off[axis] += by;
  return off;
}

Eigen::MatrixXd top_block(const Eigen::MatrixXd& c, Eigen::Index m) {
  return c.topLeftCorner(m, m);
}

// Element of the stabilizer of blockdiag(l J) closest to `r` on the
// diagonal blocks of each cluster: polar part of the J-commuting projection.
Eigen::MatrixXd align_to_identity(const Eigen::MatrixXd& r, const std::vector<int>& clusters) {
  Eigen::MatrixXd out = r;
  Eigen::Index start = 0;
  for (const int size : clusters) {
    const Eigen::Index w = 2 * size;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(w, w);
    for (Eigen::Index k = 0; k < size; ++k) {
      j(2 * k, 2 * k + 1) = 1.0;
      j(2 * k + 1, 2 * k) = -1.0;
    }
    const Eigen::MatrixXd block = r.block(start, start, w, w);
    const Eigen::MatrixXd commuting = 0.5 * (block - j * block * j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(commuting, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd h = svd.matrixV() * svd.matrixU().transpose();
    out.middleRows(start, w) = h * r.middleRows(start, w);
    start += w;
  }
  return out;
}

}  // namespace

GaugeContext::GaugeContext(const Reducer& reducer, std::vector<double> base)
    : reducer_(reducer), base_(std::move(base)) {
  const Offset zero(base_.size(), 0);
  const auto m = static_cast<Eigen::Index>(reducer_.dim() - 1);
  const RawPoint& r = raw(zero);
  const auto snf = linalg::skew_normal_form(top_block(r.c.back(), m), reducer_.options().tol);
  reference_ = snf.basis.transpose();
  normal_.emplace(zero, Normal{reference_, snf.lambdas, snf.clusters});
}

double GaugeContext::step() const noexcept { return reducer_.options().fd_step; }

std::vector<double> GaugeContext::point(const Offset& off) const {
  std::vector<double> p = base_;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += off[i] * step();
  return p;
}

const RawPoint& GaugeContext::raw(const Offset& off) {
  auto it = raw_.find(off);
  if (it == raw_.end()) {
    it = raw_.emplace(off, reducer_.evaluator().evaluate(point(off), reducer_.options().tol)).first;
  }
  return it->second;
}

const GaugeContext::Normal& GaugeContext::normal(const Offset& off) {
  if (auto it = normal_.find(off); it != normal_.end()) return it->second;
  const auto m = static_cast<Eigen::Index>(reducer_.dim() - 1);
  const Eigen::MatrixXd omega = top_block(raw(off).c.back(), m);
  const Eigen::MatrixXd rotated = reference_ * omega * reference_.transpose();
  const auto snf = linalg::skew_normal_form(rotated, reducer_.options().tol);
  const Eigen::MatrixXd r = align_to_identity(snf.basis.transpose(), snf.clusters);
  return normal_.emplace(off, Normal{r * reference_, snf.lambdas, snf.clusters}).first->second;
}

Eigen::VectorXd GaugeContext::shift(const Offset& off) {
  const std::size_t d = reducer_.dim();
  const auto m = static_cast<Eigen::Index>(d - 1);
  const auto last = static_cast<Eigen::Index>(d - 1);
  const Normal& nf = normal(off);
  const double s = 1.0 / nf.lambdas.front();

  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(last + 1, last + 1);
  m1.topLeftCorner(m, m) = nf.rotation;
  m1(last, last) = s;
  std::vector<Eigen::MatrixXd> dm1(d, Eigen::MatrixXd::Zero(last + 1, last + 1));
  for (std::size_t mu = 0; mu < d; ++mu) {
    const double sp = 1.0 / normal(shifted(off, mu, 1)).lambdas.front();
    const double sm = 1.0 / normal(shifted(off, mu, -1)).lambdas.front();
    dm1[mu](last, last) = (sp - sm) / (2 * step());
  }
  // Only the last row of the transformed coefficients is meaningful: the
  // rotation is held fixed, which does not affect d theta'^{2n+1}.
  const Eigen::MatrixXd top = transform_coefficients(raw(off), m1, dm1).back();
  const Eigen::MatrixXd omega = top.topLeftCorner(m, m);
  const Eigen::VectorXd mixed = top.col(last).head(m);
  return omega.partialPivLu().solve(mixed);
}

Eigen::MatrixXd GaugeContext::group(const Offset& off) {
  if (auto it = group_.find(off); it != group_.end()) return it->second;
  const auto last = static_cast<Eigen::Index>(reducer_.dim() - 1);
  const Normal& nf = normal(off);
  const double s = 1.0 / nf.lambdas.front();
  const Eigen::VectorXd b = shift(off);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(last + 1, last + 1);
  g.topLeftCorner(last, last) = nf.rotation;
  g.col(last).head(last) = s * b;
  g(last, last) = s;
  return group_.emplace(off, std::move(g)).first->second;
}

const GaugeContext::Gauged& GaugeContext::reduced(const Offset& off) {
  if (auto it = reduced_.find(off); it != reduced_.end()) return it->second;
  const std::size_t d = reducer_.dim();
  Gauged out;
  out.group = group(off);
  std::vector<Eigen::MatrixXd> dm(d);
  for (std::size_t mu = 0; mu < d; ++mu) {
    dm[mu] = (group(shifted(off, mu, 1)) - group(shifted(off, mu, -1))) / (2 * step());
  }
  const RawPoint& r = raw(off);
  out.c = transform_coefficients(r, out.group, dm);
  out.coframe = out.group * r.theta;
  const Normal& nf = normal(off);
  out.lambdas = nf.lambdas;
  out.clusters = nf.clusters;
  out.b = shift(off);
  return reduced_.emplace(off, std::move(out)).first->second;
}

Reducer::Reducer(CoframeField raw, ReductionOptions options)
    : evaluator_(std::move(raw)), options_(options) {}

RawPoint Reducer::raw(std::span<const double> point) const {
  return evaluator_.evaluate(point, options_.tol);
}

FirstReduction Reducer::first_reduction(std::span<const double> point) const {
  const RawPoint r = raw(point);
  const auto m = static_cast<Eigen::Index>(dim() - 1);
  const auto snf = linalg::skew_normal_form(top_block(r.c.back(), m), options_.tol);
  FirstReduction out;
  out.rotation = snf.basis.transpose();
  out.lambdas = snf.lambdas;
  out.clusters = snf.clusters;
  for (const double l : snf.lambdas) out.mu.push_back(l / snf.lambdas.front());
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(m + 1, m + 1);
  m1.topLeftCorner(m, m) = out.rotation;
  m1(m, m) = 1.0 / snf.lambdas.front();
  out.coframe = m1 * r.theta;
  return out;
}

SecondReduction Reducer::second_reduction(std::span<const double> point) const {
  GaugeContext ctx(*this, {point.begin(), point.end()});
  const GaugeContext::Offset zero(dim(), 0);
  SecondReduction out;
  out.group = ctx.group(zero);
  out.b = ctx.reduced(zero).b;
  out.coframe = out.group * ctx.raw(zero).theta;
  return out;
}

ReductionRecord Reducer::reduce(std::span<const double> point) const {
  GaugeContext ctx(*this, {point.begin(), point.end()});
  return reduce(ctx);
}

ReductionRecord Reducer::reduce(GaugeContext& ctx) const {
  const GaugeContext::Offset zero(dim(), 0);
  const auto& g = ctx.reduced(zero);
  const auto m = static_cast<Eigen::Index>(dim() - 1);

  ReductionRecord rec;
  rec.point = ctx.base();
  rec.lambdas = g.lambdas;
  rec.clusters = g.clusters;
  for (const double l : g.lambdas) rec.mu.push_back(l / g.lambdas.front());
  rec.b_shift = g.b;
  rec.group = g.group;
  rec.coframe = g.coframe;
  rec.c = g.c;
  const Eigen::MatrixXd top = top_block(g.c.back(), m);
  rec.top_block_violation = (top - linalg::skew_block_form(rec.mu)).cwiseAbs().maxCoeff();
  rec.mixed_block_violation = g.c.back().col(m).head(m).cwiseAbs().maxCoeff();
  rec.stabilizer_dim =
      stabilizer_dimension(top, std::max(options_.tol, linalg::kClusterTolerance));
  return rec;
}

Eigen::VectorXd ReductionRecord::contact_dual() const {
  return coframe.inverse().col(coframe.cols() - 1);
}

sym::Expr pair(const sym::TwoForm& w, const std::vector<sym::Expr>& u,
               const std::vector<sym::Expr>& v) {
  sym::Expr out;
  const std::size_t d = w.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const sym::Expr& c = w.at(i, j);
      if (c.is_zero()) continue;
      out = out + c * (u[i] * v[j] - u[j] * v[i]);
    }
  }
  return out;
}

SymbolicReductionN1 symbolic_reduction_n1(const CoframeField& cf,
                                          std::span<const std::vector<double>> points, double tol) {
  if (cf.dim() != 3) throw std::invalid_argument("symbolic_reduction_n1: needs a 3-dimensional chart");
  std::vector<std::vector<sym::Expr>> theta(3);
  for (std::size_t a = 0; a < 3; ++a) theta[a] = cf.forms[a].coeffs;
  const auto inv = symbolic_inverse(theta, points, tol);
  // Frame vectors are the columns of the inverse.
  std::vector<std::vector<sym::Expr>> e(3, std::vector<sym::Expr>(3));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t mu = 0; mu < 3; ++mu) e[i][mu] = inv[mu][i];
  }

  const sym::TwoForm d3 = sym::exterior_d(cf.forms[2]);
  const sym::Expr w12 = pair(d3, e[0], e[1]);
  int sign = 0;
  for (const auto& p : points) {
    const double v = sym::eval(w12, p);
    if (std::abs(v) < tol) throw ContactDegeneracy("d theta^3(E1, E2) vanishes at a sample point");
    const int s = v > 0 ? 1 : -1;
    if (sign != 0 && s != sign) throw GeometryError("d theta^3(E1, E2) changes sign");
    sign = s;
  }
  if (sign == 0) sign = 1;
  const sym::Expr sgn(static_cast<long>(sign));

  SymbolicReductionN1 out;
  out.lambda = sgn * w12;
  const sym::Expr s = sym::Expr(1L) / out.lambda;
  const std::vector<sym::OneForm> th1 = {cf.forms[0], sgn * cf.forms[1], s * cf.forms[2]};
  const std::vector<std::vector<sym::Expr>> e1 = {
      e[0], {sgn * e[1][0], sgn * e[1][1], sgn * e[1][2]},
      {out.lambda * e[2][0], out.lambda * e[2][1], out.lambda * e[2][2]}};

  const sym::TwoForm d3p = sym::exterior_d(th1[2]);
  const sym::Expr m1 = pair(d3p, e1[0], e1[2]);
  const sym::Expr m2 = pair(d3p, e1[1], e1[2]);
  const sym::Expr b1 = -m2;
  const sym::Expr b2 = m1;

  out.coframe = {th1[0] + b1 * th1[2], th1[1] + b2 * th1[2], th1[2]};
  out.frame = {e1[0], e1[1], std::vector<sym::Expr>(3)};
  for (std::size_t mu = 0; mu < 3; ++mu) {
    out.frame[2][mu] = e1[2][mu] - b1 * e1[0][mu] - b2 * e1[1][mu];
  }
  out.c.assign(hom2_dim(1), sym::Expr());
  for (std::size_t k = 0; k < 3; ++k) {
    const sym::TwoForm dk = sym::exterior_d(out.coframe[k]);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        out.c[QHom2::index(1, k, i, j)] = pair(dk, out.frame[i], out.frame[j]);
      }
    }
  }
  return out;
}

}  // namespace srcartan
