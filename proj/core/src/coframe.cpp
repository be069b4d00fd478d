#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "srcartan/errors.hpp"
#include "srcartan/reduction.hpp"

namespace srcartan {

namespace {

std::string point_text(std::span<const double> p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

// Smallest |e| over the points where e evaluates; +inf for a constant 0 is
// avoided by the is_zero check in the caller.
double min_magnitude(const sym::Expr& e, std::span<const std::vector<double>> points) {
  if (e.is_constant()) return std::abs(e.value().get_d());
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    try {
      lo = std::min(lo, std::abs(sym::eval(e, p)));
    } catch (const EvaluationError&) {
      return 0.0;
    }
  }
  return lo;
}

using ExprMatrix = std::vector<std::vector<sym::Expr>>;

// Laplace expansion along the first selected row, memoised on the
// (row set, column set) masks.
class MinorTable {
 public:
  explicit MinorTable(const ExprMatrix& m) : m_(m) {}

  sym::Expr det(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0) return sym::Expr(1L);
    const auto key = std::pair{rows, cols};
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto r = static_cast<std::size_t>(std::countr_zero(rows));
    sym::Expr sum;
    int pos = 0;
    for (std::size_t c = 0; c < m_.size(); ++c) {
      if (!(cols >> c & 1U)) continue;
      if (!m_[r][c].is_zero()) {
        const sym::Expr term = m_[r][c] * det(rows & ~(1U << r), cols & ~(1U << c));
        sum = pos % 2 == 0 ? sum + term : sum - term;
      }
      ++pos;
    }
    memo_.emplace(key, sum);
    return sum;
  }

 private:
  const ExprMatrix& m_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, sym::Expr> memo_;
};

// adj(m) / det(m); used when no single entry can serve as a pivot on all
// points although the determinant stays away from zero.
ExprMatrix adjugate_inverse(const ExprMatrix& m, std::span<const std::vector<double>> points,
                            double tol) {
  const std::size_t d = m.size();
  if (d > 16) throw GeometryError("matrix is singular at a sample point");
  MinorTable minors(m);
  const std::uint32_t all = (1U << d) - 1;
  const sym::Expr det = minors.det(all, all);
  if (det.is_zero() || min_magnitude(det, points) < tol) {
    throw GeometryError("matrix is singular at a sample point (determinant)");
  }
  ExprMatrix inv(d, std::vector<sym::Expr>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const sym::Expr cof = minors.det(all & ~(1U << j), all & ~(1U << i));
      if (cof.is_zero()) continue;
      inv[i][j] = ((i + j) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return inv;
}

}  // namespace

int SubRiemannianSpec::n() const {
  const std::size_t d = chart.dimension();
  if (d < 3 || d % 2 == 0) {
    throw SchemaError("chart dimension must be odd and at least 3, got " + std::to_string(d));
  }
  return static_cast<int>((d - 1) / 2);
}

void SubRiemannianSpec::validate_shape() const {
  const std::size_t dim = chart.dimension();
  const std::size_t m = 2 * static_cast<std::size_t>(n());
  if (eta.dim() != dim) throw SchemaError("eta has the wrong number of components");
  if (const auto* fm = std::get_if<FrameMetric>(&metric)) {
    if (fm->frame.size() != m) {
      throw SchemaError("frame must have " + std::to_string(m) + " vector fields");
    }
    for (const auto& v : fm->frame) {
      if (v.size() != dim) throw SchemaError("frame vector has the wrong number of components");
    }
    if (fm->gram.size() != m) throw SchemaError("gram must be " + std::to_string(m) + " square");
    for (const auto& row : fm->gram) {
      if (row.size() != m) throw SchemaError("gram must be " + std::to_string(m) + " square");
    }
  } else {
    const auto& dc = std::get<DeclaredCoframe>(metric);
    if (dc.forms.size() != m) {
      throw SchemaError("coframe must list " + std::to_string(m) + " forms besides eta");
    }
    for (const auto& f : dc.forms) {
      if (f.dim() != dim) throw SchemaError("coframe form has the wrong number of components");
    }
  }
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kRaw:
      return "raw";
    case Provenance::kFirstReduced:
      return "first-reduced";
    case Provenance::kSecondReduced:
      return "second-reduced";
  }
  return "?";
}

Eigen::MatrixXd CoframeField::evaluate(std::span<const double> point) const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd theta(d, d);
  for (Eigen::Index a = 0; a < d; ++a) theta.row(a) = sym::evaluate(forms[a], point).transpose();
  return theta;
}

std::vector<std::vector<sym::Expr>> symbolic_inverse(std::vector<std::vector<sym::Expr>> m,
                                                     std::span<const std::vector<double>> points,
                                                     double tol) {
  const std::size_t d = m.size();
  const ExprMatrix original = m;
  std::vector<std::vector<sym::Expr>> inv(d, std::vector<sym::Expr>(d));
  for (std::size_t i = 0; i < d; ++i) inv[i][i] = sym::Expr(1L);

  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = d;
    double best = 0.0;
    for (std::size_t r = col; r < d; ++r) {
      if (m[r][col].is_zero()) continue;
      const double mag = min_magnitude(m[r][col], points);
      // Constants win ties so the result stays small.
      const double score = m[r][col].is_constant() ? mag * 2 : mag;
      if (score > best) {
        best = score;
        pivot = r;
      }
    }
    if (pivot == d || best < tol) return adjugate_inverse(original, points, tol);
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    const sym::Expr p = m[col][col];
    for (std::size_t j = 0; j < d; ++j) {
      m[col][j] = m[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const sym::Expr f = m[r][col];
      for (std::size_t j = 0; j < d; ++j) {
        m[r][j] = m[r][j] - f * m[col][j];
        inv[r][j] = inv[r][j] - f * inv[col][j];
      }
    }
  }
  return inv;
}

namespace {

void check_independent(const CoframeField& cf, std::span<const std::vector<double>> points,
                       double tol) {
  for (const auto& p : points) {
    const Eigen::MatrixXd theta = cf.evaluate(p);
    if (linalg::numeric_rank(theta, tol) < cf.dim()) {
      throw GeometryError("coframe is not independent at " + point_text(p));
    }
  }
}

CoframeField from_frame(const SubRiemannianSpec& spec, const FrameMetric& fm,
                        std::span<const std::vector<double>> points, double tol) {
  const std::size_t dim = spec.chart.dimension();
  const std::size_t m = dim - 1;

  for (const auto& p : points) {
    const Eigen::VectorXd eta = sym::evaluate(spec.eta, p);
    for (std::size_t i = 0; i < m; ++i) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
      for (std::size_t mu = 0; mu < dim; ++mu) v(mu) = sym::eval(fm.frame[i][mu], p);
      if (std::abs(eta.dot(v)) > tol * std::max(1.0, eta.norm() * v.norm())) {
        throw GeometryError("frame vector " + std::to_string(i + 1) + " is not in ker eta at " +
                            point_text(p));
      }
    }
    Eigen::MatrixXd g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) g(i, j) = sym::eval(fm.gram[i][j], p);
    }
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, g.norm())) {
      throw GeometryError("gram matrix is not symmetric at " + point_text(p));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    if (eig.eigenvalues().minCoeff() <= tol) {
      throw GeometryError("metric is not positive definite at " + point_text(p));
    }
  }

  // Transversal coordinate direction: the one where eta stays largest.
  std::size_t transversal = 0;
  double best = -1.0;
  for (std::size_t mu = 0; mu < dim; ++mu) {
    const sym::Expr& c = spec.eta.coeffs[mu];
    // A constant coefficient keeps the dual coframe free of new denominators.
    const double mag = c.is_zero() ? 0.0 : min_magnitude(c, points) * (c.is_constant() ? 4 : 1);
    if (mag > best) {
      best = mag;
      transversal = mu;
    }
  }

  // Columns: frame vectors then d/dx^transversal.
  std::vector<std::vector<sym::Expr>> f(dim, std::vector<sym::Expr>(dim));
  for (std::size_t mu = 0; mu < dim; ++mu) {
    for (std::size_t i = 0; i < m; ++i) f[mu][i] = fm.frame[i][mu];
    f[mu][m] = sym::Expr(mu == transversal ? 1L : 0L);
  }
  const auto dual = symbolic_inverse(std::move(f), points, tol);

  // Cholesky G = L L^T; theta^i = sum_j L_ji phi^j.
  std::vector<std::vector<sym::Expr>> l(m, std::vector<sym::Expr>(m));
  for (std::size_t j = 0; j < m; ++j) {
    sym::Expr diag = fm.gram[j][j];
    for (std::size_t k = 0; k < j; ++k) diag = diag - l[j][k] * l[j][k];
    l[j][j] = sym::sqrt(diag);
    for (std::size_t i = j + 1; i < m; ++i) {
      sym::Expr s = fm.gram[i][j];
      for (std::size_t k = 0; k < j; ++k) s = s - l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }

  CoframeField cf;
  cf.chart = spec.chart;
  for (std::size_t i = 0; i < m; ++i) {
    sym::OneForm theta(dim);
    for (std::size_t j = i; j < m; ++j) {
      if (l[j][i].is_zero()) continue;
      theta = theta + l[j][i] * sym::OneForm(dual[j]);
    }
    cf.forms.push_back(std::move(theta));
  }
  cf.forms.push_back(spec.eta);
  return cf;
}

}  // namespace

CoframeField adapted_coframe(const SubRiemannianSpec& spec,
                             std::span<const std::vector<double>> points, double tol) {
  spec.validate_shape();
  CoframeField cf;
  if (const auto* fm = std::get_if<FrameMetric>(&spec.metric)) {
    cf = from_frame(spec, *fm, points, tol);
  } else {
    cf.chart = spec.chart;
    cf.forms = std::get<DeclaredCoframe>(spec.metric).forms;
    cf.forms.push_back(spec.eta);
  }
  check_independent(cf, points, tol);
  return cf;
}

CoframeEvaluator::CoframeEvaluator(CoframeField field) : field_(std::move(field)) {
  d_.reserve(field_.forms.size());
  for (const auto& f : field_.forms) d_.push_back(sym::exterior_d(f));
}

RawPoint CoframeEvaluator::evaluate(std::span<const double> point, double tol) const {
  RawPoint out;
  out.point.assign(point.begin(), point.end());
  out.theta = field_.evaluate(point);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(out.theta);
  lu.setThreshold(tol);
  if (!lu.isInvertible()) throw GeometryError("coframe is singular at " + point_text(point));
  out.theta_inv = lu.inverse();
  out.c.reserve(d_.size());
  for (const auto& w : d_) {
    out.c.push_back(out.theta_inv.transpose() * sym::evaluate(w, point) * out.theta_inv);
  }
  return out;
}

StructureCoefficients structure_coefficients(const CoframeField& cf, std::span<const double> point,
                                             double tol) {
  RawPoint raw = CoframeEvaluator(cf).evaluate(point, tol);
  return {std::move(raw.point), std::move(raw.c)};
}

std::vector<Eigen::MatrixXd> transform_coefficients(const RawPoint& raw, const Eigen::MatrixXd& m,
                                                    const std::vector<Eigen::MatrixXd>& dm) {
  const Eigen::Index d = m.rows();
  const Eigen::MatrixXd m_inv = m.inverse();
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(d));
  for (Eigen::Index a = 0; a < d; ++a) {
    // D(i, b) = dM_ab(E_i) = sum_mu d_mu M_ab * Theta^{-1}(mu, i).
    Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index mu = 0; mu < d; ++mu) {
      dd += raw.theta_inv.row(mu).transpose() * dm[static_cast<std::size_t>(mu)].row(a);
    }
    Eigen::MatrixXd f = dd - dd.transpose();
    for (Eigen::Index b = 0; b < d; ++b) {
      if (m(a, b) != 0.0) f += m(a, b) * raw.c[static_cast<std::size_t>(b)];
    }
    out[static_cast<std::size_t>(a)] = m_inv.transpose() * f * m_inv;
  }
  return out;
}

Eigen::VectorXd reeb_field(const sym::OneForm& eta, std::span<const double> point, double tol) {
  const Eigen::VectorXd e = sym::evaluate(eta, point);
  const Eigen::MatrixXd w = sym::evaluate(sym::exterior_d(eta), point);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeFullV);
  const Eigen::Index d = w.rows();
  const auto& s = svd.singularValues();
  if (s(d - 2) <= tol * std::max(1.0, s(0))) {
    throw ContactDegeneracy("d eta has rank below " + std::to_string(d - 1) + " at " +
                            point_text(point));
  }
  Eigen::VectorXd xi = svd.matrixV().col(d - 1);
  const double norm = e.dot(xi);
  if (std::abs(norm) <= tol * std::max(1.0, e.norm())) {
    throw ContactDegeneracy("eta vanishes on ker d eta at " + point_text(point));
  }
  return xi / norm;
}

}  // namespace srcartan
