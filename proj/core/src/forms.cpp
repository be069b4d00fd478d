#include "srcartan/forms.hpp"

#include <cmath>

#include "srcartan/errors.hpp"

namespace srcartan::sym {

OneForm OneForm::basis(std::size_t dim, std::size_t i) {
  OneForm out(dim);
  out.coeffs.at(i) = Expr(1L);
  return out;
}

Expr TwoForm::get(std::size_t i, std::size_t j) const {
  if (i == j) return Expr();
  return i < j ? at(i, j) : -at(j, i);
}

bool TwoForm::is_zero() const {
  for (const Expr& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("forms on charts of different dimension");
}

}  // namespace

OneForm operator+(const OneForm& a, const OneForm& b) {
  require_same_dim(a.dim(), b.dim());
  OneForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out.coeffs[i] = a.coeffs[i] + b.coeffs[i];
  return out;
}

OneForm operator-(const OneForm& a, const OneForm& b) {
  require_same_dim(a.dim(), b.dim());
  OneForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out.coeffs[i] = a.coeffs[i] - b.coeffs[i];
  return out;
}

OneForm operator*(const Expr& f, const OneForm& a) {
  OneForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out.coeffs[i] = f * a.coeffs[i];
  return out;
}

TwoForm operator+(const TwoForm& a, const TwoForm& b) {
  require_same_dim(a.dim(), b.dim());
  TwoForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

TwoForm operator*(const Expr& f, const TwoForm& a) {
  TwoForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) out.at(i, j) = f * a.at(i, j);
  return out;
}

OneForm exterior_d(const Expr& f, std::size_t dim) {
  OneForm out(dim);
  for (std::size_t i = 0; i < dim; ++i) out.coeffs[i] = diff(f, i);
  return out;
}

TwoForm exterior_d(const OneForm& w) {
  TwoForm out(w.dim());
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = i + 1; j < w.dim(); ++j)
      out.at(i, j) = diff(w.coeffs[j], i) - diff(w.coeffs[i], j);
  return out;
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  require_same_dim(a.dim(), b.dim());
  TwoForm out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j)
      out.at(i, j) = a.coeffs[i] * b.coeffs[j] - a.coeffs[j] * b.coeffs[i];
  return out;
}

// Differentials become extra chart variables dim..2*dim-1; linearity is
// checked structurally after differentiation.
OneForm parse_one_form(std::string_view src, const Chart& chart, const Bindings& bindings) {
  const std::size_t dim = chart.dimension();
  std::vector<std::string> names = chart.names();
  for (const std::string& name : chart.names()) {
    const std::string d = "d" + name;
    if (chart.index_of(d)) {
      throw SchemaError("chart variable '" + d + "' clashes with the differential of '" + name +
                        "'");
    }
    names.push_back(d);
  }
  const Chart extended(names);
  const Expr e = parse(src, extended, bindings);

  std::vector<Expr> zeros(2 * dim);
  for (std::size_t i = 0; i < dim; ++i) zeros[i] = Expr::variable(i);
  if (!substitute(e, zeros).is_zero()) {
    throw ParseError("one-form '" + std::string(src) + "' has a term without a differential", 0);
  }
  OneForm out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Expr c = diff(e, dim + i);
    for (std::size_t k = dim; k < 2 * dim; ++k) {
      if (depends_on(c, k)) {
        throw ParseError("one-form '" + std::string(src) + "' is not linear in the differentials",
                         0);
      }
    }
    out.coeffs[i] = c;
  }
  return out;
}

Eigen::VectorXd evaluate(const OneForm& w, std::span<const double> point) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(w.dim()));
  for (std::size_t i = 0; i < w.dim(); ++i) out(static_cast<Eigen::Index>(i)) = eval(w.coeffs[i], point);
  return out;
}

Eigen::MatrixXd evaluate(const TwoForm& w, std::span<const double> point) {
  const auto n = static_cast<Eigen::Index>(w.dim());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < w.dim(); ++i) {
    for (std::size_t j = i + 1; j < w.dim(); ++j) {
      const double v = eval(w.at(i, j), point);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = -v;
    }
  }
  return out;
}

std::string to_string(const OneForm& w, const Chart& chart) {
  std::string out;
  for (std::size_t i = 0; i < w.dim(); ++i) {
    if (w.coeffs[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    if (!w.coeffs[i].is_one()) out += to_string(w.coeffs[i], chart) + "*";
    out += "d" + chart.name(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace srcartan::sym
