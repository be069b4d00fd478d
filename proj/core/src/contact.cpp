#include <algorithm>
#include <cmath>
#include <sstream>

#include "srcartan/contact.hpp"
#include "srcartan/errors.hpp"

namespace srcartan {

namespace {

using ExprMatrix = std::vector<std::vector<sym::Expr>>;

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  const std::size_t n = a.size(), m = b.front().size(), k = b.size();
  ExprMatrix out(n, std::vector<sym::Expr>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      sym::Expr s;
      for (std::size_t l = 0; l < k; ++l) {
        if (a[i][l].is_zero() || b[l][j].is_zero()) continue;
        s = s + a[i][l] * b[l][j];
      }
      out[i][j] = s;
    }
  }
  return out;
}

ExprMatrix transpose(const ExprMatrix& a) {
  ExprMatrix out(a.front().size(), std::vector<sym::Expr>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

Eigen::MatrixXd evaluate(const ExprMatrix& m, std::span<const double> p) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.front().size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sym::eval(m[i][j], p);
  return out;
}

double relative(double value, double scale) { return value / std::max(1.0, scale); }

sym::Expr pfaffian(const sym::TwoForm& w, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return sym::Expr(1L);
  sym::Expr out;
  std::vector<std::size_t> sub;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const sym::Expr a = w.get(idx[0], idx[j]);
    if (a.is_zero()) continue;
    sub.clear();
    for (std::size_t k = 1; k < idx.size(); ++k) {
      if (k != j) sub.push_back(idx[k]);
    }
    const sym::Expr term = a * pfaffian(w, sub);
    out = j % 2 == 1 ? out + term : out - term;
  }
  return out;
}

// gtilde, phi from numeric eta, W and an adapted coframe theta.
struct NumericMetric {
  Eigen::VectorXd xi;
  Eigen::MatrixXd g;
  Eigen::MatrixXd phi;
};

NumericMetric numeric_metric(const Eigen::MatrixXd& theta, const Eigen::VectorXd& eta,
                             const Eigen::MatrixXd& w, double tol) {
  const Eigen::Index d = theta.rows();
  Eigen::MatrixXd sys(d + 1, d);
  sys.row(0) = eta.transpose();
  sys.bottomRows(d) = w;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs(0) = 1.0;
  NumericMetric out;
  out.xi = sys.colPivHouseholderQr().solve(rhs);
  if ((sys * out.xi - rhs).cwiseAbs().maxCoeff() > 1e3 * tol) {
    throw ContactDegeneracy("no Reeb field: eta ^ (d eta)^n vanishes");
  }
  Eigen::MatrixXd b = theta;
  b.row(d - 1) = eta.transpose();
  for (Eigen::Index i = 0; i + 1 < d; ++i) b.row(i) -= theta.row(i).dot(out.xi) * eta.transpose();
  out.g = b.transpose() * b;
  out.phi = out.g.ldlt().solve(w);
  return out;
}

}  // namespace

std::vector<sym::Expr> reeb_field_symbolic(const sym::OneForm& eta,
                                           std::span<const std::vector<double>> points, double tol) {
  const std::size_t d = eta.dim();
  const sym::TwoForm w = sym::exterior_d(eta);
  // ker W is spanned by v_mu = (-1)^mu Pf(W without row and column mu).
  std::vector<sym::Expr> v(d);
  std::vector<std::size_t> rest;
  for (std::size_t mu = 0; mu < d; ++mu) {
    rest.clear();
    for (std::size_t k = 0; k < d; ++k) {
      if (k != mu) rest.push_back(k);
    }
    v[mu] = mu % 2 == 0 ? pfaffian(w, rest) : -pfaffian(w, rest);
  }
  sym::Expr norm;
  for (std::size_t mu = 0; mu < d; ++mu) {
    if (!v[mu].is_zero() && !eta.coeffs[mu].is_zero()) norm = norm + eta.coeffs[mu] * v[mu];
  }
  for (const auto& p : points) {
    if (std::abs(sym::eval(norm, p)) <= tol) {
      std::ostringstream msg;
      msg << "no Reeb field: eta ^ (d eta)^n vanishes at (";
      for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
      msg << ")";
      throw ContactDegeneracy(msg.str());
    }
  }
  for (auto& x : v) {
    if (!x.is_zero()) x = x / norm;
  }
  return v;
}

Eigen::VectorXd ContactMetricData::xi_at(std::span<const double> p) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(xi.size()));
  for (std::size_t i = 0; i < xi.size(); ++i) out(static_cast<Eigen::Index>(i)) = sym::eval(xi[i], p);
  return out;
}

Eigen::MatrixXd ContactMetricData::gtilde_at(std::span<const double> p) const {
  return evaluate(gtilde, p);
}

Eigen::MatrixXd ContactMetricData::phi_at(std::span<const double> p) const {
  return evaluate(phi, p);
}

ContactMetricData build_contact_metric(const CoframeField& adapted, const sym::OneForm& eta,
                                       std::span<const std::vector<double>> points, double tol) {
  const std::size_t d = adapted.dim();
  for (const auto& p : points) {
    const Eigen::VectorXd a = sym::evaluate(adapted.forms.back(), p);
    const Eigen::VectorXd e = sym::evaluate(eta, p);
    const double f = e.dot(a) / a.squaredNorm();
    if (std::abs(f) < tol || (e - f * a).cwiseAbs().maxCoeff() > 1e3 * tol * std::max(1.0, e.norm())) {
      std::ostringstream msg;
      msg << "eta is not a nonvanishing multiple of the contact form at (";
      for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
      msg << ")";
      throw ContactDegeneracy(msg.str());
    }
  }

  ContactMetricData out;
  out.chart = adapted.chart;
  out.eta = eta;
  out.deta = sym::exterior_d(eta);
  out.xi = reeb_field_symbolic(eta, points, tol);

  ExprMatrix b(d, std::vector<sym::Expr>(d));
  for (std::size_t i = 0; i + 1 < d; ++i) {
    sym::Expr along;
    for (std::size_t mu = 0; mu < d; ++mu) {
      if (adapted.forms[i].coeffs[mu].is_zero() || out.xi[mu].is_zero()) continue;
      along = along + adapted.forms[i].coeffs[mu] * out.xi[mu];
    }
    for (std::size_t mu = 0; mu < d; ++mu) {
      b[i][mu] = along.is_zero() ? adapted.forms[i].coeffs[mu]
                                 : adapted.forms[i].coeffs[mu] - along * eta.coeffs[mu];
    }
  }
  b[d - 1] = eta.coeffs;
  out.gtilde = multiply(transpose(b), b);

  // phi = gtilde^{-1} W = B^{-1} B^{-T} W.
  const ExprMatrix binv = symbolic_inverse(b, points, tol);
  ExprMatrix w(d, std::vector<sym::Expr>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) w[i][j] = out.deta.get(i, j);
  out.phi = multiply(binv, multiply(transpose(binv), w));
  return out;
}

bool AssociatedResiduals::holds(double tol) const {
  return reeb <= tol && compatibility <= tol && almost_complex <= tol && skew_adjoint <= tol;
}

AssociatedResiduals associated_residuals(const Eigen::MatrixXd& g, const Eigen::MatrixXd& phi,
                                         const Eigen::VectorXd& eta, const Eigen::VectorXd& xi,
                                         const Eigen::MatrixXd& w) {
  const Eigen::Index d = g.rows();
  AssociatedResiduals r;
  r.reeb = relative((g * xi - eta).cwiseAbs().maxCoeff(), eta.cwiseAbs().maxCoeff());
  r.compatibility = relative((g * phi - w).cwiseAbs().maxCoeff(), w.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd target = -Eigen::MatrixXd::Identity(d, d) + xi * eta.transpose();
  r.almost_complex = relative((phi * phi - target).cwiseAbs().maxCoeff(), phi.squaredNorm());
  const Eigen::MatrixXd gp = g * phi;
  r.skew_adjoint = relative((gp + gp.transpose()).cwiseAbs().maxCoeff(), gp.cwiseAbs().maxCoeff());
  return r;
}

AssociatedVerdict check_associated(const ContactMetricData& data,
                                   std::span<const std::vector<double>> points, double tol) {
  AssociatedVerdict v;
  for (const auto& p : points) {
    const auto r = associated_residuals(data.gtilde_at(p), data.phi_at(p), sym::evaluate(data.eta, p),
                                        data.xi_at(p), sym::evaluate(data.deta, p));
    v.worst.reeb = std::max(v.worst.reeb, r.reeb);
    v.worst.compatibility = std::max(v.worst.compatibility, r.compatibility);
    v.worst.almost_complex = std::max(v.worst.almost_complex, r.almost_complex);
    v.worst.skew_adjoint = std::max(v.worst.skew_adjoint, r.skew_adjoint);
    v.points.push_back(r);
  }
  v.associated = v.worst.holds(tol);
  return v;
}

AssociatedResiduals constant_factor_residuals(const CoframeEvaluator& adapted,
                                              std::span<const double> point, double f, double tol) {
  const Eigen::MatrixXd theta = adapted.field().evaluate(point);
  const Eigen::VectorXd eta = f * theta.row(theta.rows() - 1).transpose();
  const Eigen::MatrixXd w = f * sym::evaluate(adapted.differentials().back(), point);
  const NumericMetric m = numeric_metric(theta, eta, w, tol);
  return associated_residuals(m.g, m.phi, eta, m.xi, w);
}

AssociatedSearch search_associated_form(const CoframeField& adapted,
                                        std::span<const std::vector<double>> points, double tol) {
  const Reducer reducer(adapted, {.tol = tol});
  AssociatedSearch out;
  out.exists = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    AssociatedSearchPoint sp;
    sp.point = points[k];
    sp.lambdas = reducer.first_reduction(points[k]).lambdas;
    for (const double l : sp.lambdas) {
      const double f2 = 1.0 / (l * l);
      if (sp.required_f2.empty() ||
          std::abs(sp.required_f2.back() - f2) > linalg::kClusterTolerance * std::max(1.0, f2)) {
        sp.required_f2.push_back(f2);
      }
    }
    std::sort(sp.required_f2.begin(), sp.required_f2.end(), std::greater<>());
    if (sp.required_f2.size() == 1) {
      sp.f = 1.0 / sp.lambdas.front();
    } else if (out.exists) {
      out.exists = false;
      out.obstructed_at = k;
      out.certificate = sp.required_f2;
      std::sort(out.certificate.begin(), out.certificate.end());
    }
    out.points.push_back(std::move(sp));
  }
  return out;
}

SubRiemannianSpec r5_example(const Rational& p, const Rational& q, const Rational& r,
                             const Rational& s) {
  SubRiemannianSpec spec;
  spec.name = "r5(" + linalg::to_string(p) + "," + linalg::to_string(q) + "," +
              linalg::to_string(r) + "," + linalg::to_string(s) + ")";
  spec.chart = sym::Chart({"x1", "y1", "x2", "y2", "z"});
  spec.eta = sym::parse_one_form("dz + x1*dy1 + x2*dy2", spec.chart);
  FrameMetric fm;
  const auto x1 = sym::Expr::variable(0);
  const auto x2 = sym::Expr::variable(2);
  const sym::Expr o(0L), i(1L);
  fm.frame = {{i, o, o, o, o}, {o, i, o, o, -x1}, {o, o, i, o, o}, {o, o, o, i, -x2}};
  const std::vector<Rational> diag = {p, q, r, s};
  for (std::size_t a = 0; a < 4; ++a) {
    if (diag[a] <= 0) throw GeometryError("metric coefficients must be positive");
    std::vector<sym::Expr> row(4, o);
    row[a] = sym::Expr(diag[a]);
    fm.gram.push_back(std::move(row));
  }
  spec.metric = std::move(fm);
  return spec;
}

PhiTableCheck phi_table_check(const Rational& p, const Rational& q, const Rational& r,
                              const Rational& s, double f, std::span<const double> point,
                              bool frame_order_metric, double tol) {
  // Frame order e1, e2, e3, e4 pairs with dx1, dx2, dy1, dy2.
  const SubRiemannianSpec spec = frame_order_metric ? r5_example(p, r, q, s) : r5_example(p, q, r, s);
  const std::vector<std::vector<double>> pts = {{point.begin(), point.end()}};
  const CoframeField cf = adapted_coframe(spec, pts, tol);
  const Eigen::MatrixXd theta = cf.evaluate(point);
  const Eigen::VectorXd eta = f * theta.row(4).transpose();
  const Eigen::MatrixXd w = f * sym::evaluate(sym::exterior_d(spec.eta), point);
  const NumericMetric m = numeric_metric(theta, eta, w, tol);

  const double x1 = point[0], x2 = point[2];
  Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(5, 5);
  frame.col(0) << 1, 0, 0, 0, 0;
  frame.col(1) << 0, 0, 1, 0, 0;
  frame.col(2) << 0, -1, 0, 0, x1;
  frame.col(3) << 0, 0, 0, -1, x2;
  frame.col(4) = m.xi;
  const Eigen::MatrixXd coords = frame.partialPivLu().solve(m.phi * frame);

  PhiTableCheck out;
  out.phi_on_frame = coords.topLeftCorner(4, 4);
  const double pd = p.get_d(), qd = q.get_d(), rd = r.get_d(), sd = s.get_d();
  Eigen::Matrix4d table = Eigen::Matrix4d::Zero();
  table(2, 0) = f / rd;
  table(3, 1) = f / sd;
  table(0, 2) = -f / pd;
  table(1, 3) = -f / qd;
  // Coefficients of dx1^2, dy1^2, dx2^2, dy2^2 actually used.
  const double cx1 = pd, cy1 = frame_order_metric ? rd : qd, cx2 = frame_order_metric ? qd : rd,
               cy2 = sd;
  Eigen::Matrix4d derived = Eigen::Matrix4d::Zero();
  derived(2, 0) = f / cy1;
  derived(3, 1) = f / cy2;
  derived(0, 2) = -f / cx1;
  derived(1, 3) = -f / cx2;
  const double scale = std::max(1.0, table.cwiseAbs().maxCoeff());
  out.matches_table = (out.phi_on_frame - table).cwiseAbs().maxCoeff() < 1e3 * tol * scale;
  out.matches_derived = (out.phi_on_frame - derived).cwiseAbs().maxCoeff() < 1e3 * tol * scale;
  return out;
}

}  // namespace srcartan
