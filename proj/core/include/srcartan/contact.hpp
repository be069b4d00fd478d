#pragma once

// Contact Riemannian structures attached to a sub-Riemannian structure.
//
// For a contact form eta with ker eta = D, Reeb field xi and an adapted
// coframe theta (orthonormal on D):
//   gtilde = sum_i (theta^i - theta^i(xi) eta)^2 + eta^2,
//   gtilde(X, phi Y) = d eta(X, Y), i.e. phi = gtilde^{-1} W,
// where W is the coordinate matrix of d eta. gtilde is associated with eta
// when additionally phi^2 = -id + eta (x) xi.
//
// With eta = f alpha for a constant f at a point, phi restricted to D is
// f times the skew matrix of d alpha|_D, so phi^2 = -id on D needs
// f = 1 / l_i for every skew eigenvalue l_i: the required values of f^2 are
// {1 / l_i^2} and an associated form exists at the point iff they agree.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/forms.hpp"
#include "srcartan/reduction.hpp"

namespace srcartan {

using linalg::Rational;

/// Reeb field with expression components: the kernel of W is spanned by the
/// signed Pfaffians of its principal minors, normalised by eta. Throws
/// ContactDegeneracy where eta ^ (d eta)^n vanishes at one of `points`.
std::vector<sym::Expr> reeb_field_symbolic(const sym::OneForm& eta,
                                           std::span<const std::vector<double>> points, double tol);

struct ContactMetricData {
  sym::Chart chart;
  sym::OneForm eta;
  sym::TwoForm deta;
  std::vector<sym::Expr> xi;
  std::vector<std::vector<sym::Expr>> gtilde;
  std::vector<std::vector<sym::Expr>> phi;

  Eigen::VectorXd xi_at(std::span<const double> p) const;
  Eigen::MatrixXd gtilde_at(std::span<const double> p) const;
  Eigen::MatrixXd phi_at(std::span<const double> p) const;
};

/// `eta` must be a nonvanishing multiple of the coframe's last form at the
/// points (ContactDegeneracy otherwise).
ContactMetricData build_contact_metric(const CoframeField& adapted, const sym::OneForm& eta,
                                       std::span<const std::vector<double>> points, double tol);

/// Largest violation of g(xi, X) = eta(X), g(X, phi Y) = d eta(X, Y) and
/// phi phi X = -X + eta(X) xi, and of the g-skew-adjointness of phi.
struct AssociatedResiduals {
  double reeb = 0.0;
  double compatibility = 0.0;
  double almost_complex = 0.0;
  double skew_adjoint = 0.0;

  bool holds(double tol) const;
};

struct AssociatedVerdict {
  std::vector<AssociatedResiduals> points;
  AssociatedResiduals worst;
  bool associated = false;
};

AssociatedResiduals associated_residuals(const Eigen::MatrixXd& g, const Eigen::MatrixXd& phi,
                                         const Eigen::VectorXd& eta, const Eigen::VectorXd& xi,
                                         const Eigen::MatrixXd& w);

AssociatedVerdict check_associated(const ContactMetricData& data,
                                   std::span<const std::vector<double>> points, double tol);

/// Residuals at one point for eta = f alpha with f constant, alpha the
/// coframe's last form.
AssociatedResiduals constant_factor_residuals(const CoframeEvaluator& adapted,
                                              std::span<const double> point, double f, double tol);

struct AssociatedSearchPoint {
  std::vector<double> point;
  std::vector<double> lambdas;
  std::vector<double> required_f2;  // distinct values of 1 / l_i^2, descending
  std::optional<double> f;          // 1 / l1 when all agree
};

struct AssociatedSearch {
  std::vector<AssociatedSearchPoint> points;
  bool exists = false;
  /// Required f^2 values at the first obstructed point.
  std::vector<double> certificate;
  std::optional<std::size_t> obstructed_at;
};

AssociatedSearch search_associated_form(const CoframeField& adapted,
                                        std::span<const std::vector<double>> points, double tol);

/// D = ker(dz + x1 dy1 + x2 dy2) on R^5, g = p dx1^2 + q dy1^2 + r dx2^2 + s dy2^2.
SubRiemannianSpec r5_example(const Rational& p, const Rational& q, const Rational& r,
                             const Rational& s);

/// phi on the frame e1 = d/dx1, e2 = d/dx2, e3 = x1 d/dz - d/dy1,
/// e4 = x2 d/dz - d/dy2 of the R^5 example with eta = f alpha, compared with
/// the tabulated action phi e1 = (f/r) e3, phi e2 = (f/s) e4,
/// phi e3 = -(f/p) e1, phi e4 = -(f/q) e2. With `frame_order_metric` the
/// coefficients are read as g(e1, e1), ..., g(e4, e4) instead of as the
/// coefficients of dx1^2, dy1^2, dx2^2, dy2^2.
struct PhiTableCheck {
  Eigen::Matrix4d phi_on_frame;  // column j = phi e_j in the frame
  bool matches_table = false;
  /// Derived from the coordinate metric: phi e1 = (f/q) e3, phi e2 = (f/s) e4,
  /// phi e3 = -(f/p) e1, phi e4 = -(f/r) e2.
  bool matches_derived = false;
};

PhiTableCheck phi_table_check(const Rational& p, const Rational& q, const Rational& r,
                              const Rational& s, double f, std::span<const double> point,
                              bool frame_order_metric, double tol);

}  // namespace srcartan
