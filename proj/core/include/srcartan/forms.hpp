#pragma once

// Differential one- and two-forms with Expr coefficients on a chart.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "srcartan/indexing.hpp"
#include "srcartan/symexpr.hpp"

namespace srcartan::sym {

struct OneForm {
  std::vector<Expr> coeffs;  // coefficient of dx_i

  OneForm() = default;
  explicit OneForm(std::size_t dim) : coeffs(dim) {}
  explicit OneForm(std::vector<Expr> c) : coeffs(std::move(c)) {}

  std::size_t dim() const noexcept { return coeffs.size(); }
  static OneForm basis(std::size_t dim, std::size_t i);
};

/// Strictly upper-triangular storage: coefficient of dx_i ^ dx_j, i < j, at pair_index(i, j).
class TwoForm {
 public:
  TwoForm() = default;
  explicit TwoForm(std::size_t dim) : dim_(dim), coeffs_(pair_count(dim)) {}

  std::size_t dim() const noexcept { return dim_; }
  const Expr& at(std::size_t i, std::size_t j) const { return coeffs_[pair_index(i, j, dim_)]; }
  Expr& at(std::size_t i, std::size_t j) { return coeffs_[pair_index(i, j, dim_)]; }
  /// Antisymmetric extension, i == j gives 0.
  Expr get(std::size_t i, std::size_t j) const;
  const std::vector<Expr>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Expr> coeffs_;
};

OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator*(const Expr& f, const OneForm& a);
TwoForm operator+(const TwoForm& a, const TwoForm& b);
TwoForm operator*(const Expr& f, const TwoForm& a);

OneForm exterior_d(const Expr& f, std::size_t dim);
/// (dw)_ij = d_i w_j - d_j w_i.
TwoForm exterior_d(const OneForm& w);
TwoForm wedge(const OneForm& a, const OneForm& b);

/// Parses text like "dz + x1*dy1 + x2*dy2": an expression that is linear in
/// the differentials d<name> with coefficients free of differentials.
OneForm parse_one_form(std::string_view src, const Chart& chart, const Bindings& bindings = {});

Eigen::VectorXd evaluate(const OneForm& w, std::span<const double> point);
/// Full antisymmetric matrix M with M(i, j) = w(d_i, d_j).
Eigen::MatrixXd evaluate(const TwoForm& w, std::span<const double> point);

std::string to_string(const OneForm& w, const Chart& chart);

}  // namespace srcartan::sym
