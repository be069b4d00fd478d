#pragma once

// Report data for the three commands, with JSON-lines and table renderings.
// JSON lines: one "meta" object, one "row" object per sample point, one
// "summary" object. Parsing a written report gives back equal data.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace srcartan {

struct ContactMetricCell {
  bool exists = false;
  std::optional<double> f;
  std::vector<double> required_f2;

  bool operator==(const ContactMetricCell&) const = default;
};

struct InvariantRow {
  std::vector<double> point;
  std::vector<double> lambdas;
  std::vector<double> mu;
  std::vector<double> b_shift;
  std::vector<double> torsion;    // coordinates on the complement basis
  std::vector<double> curvature;  // R(E_i, E_j) on the g2 basis, pairs i < j in order
  std::size_t stabilizer_dim = 0;
  ContactMetricCell contact_metric;

  bool operator==(const InvariantRow&) const = default;
};

struct InvariantReport {
  std::string name;
  int n = 0;
  std::size_t dimension = 0;
  double tolerance = 0.0;
  double fd_step = 0.0;
  std::string gram;
  std::size_t complement_dim = 0;
  std::size_t dropped_points = 0;
  std::vector<InvariantRow> rows;
  bool constant_invariants = false;
  std::vector<std::size_t> stabilizer_dims;  // distinct, ascending
  bool single_stratum = false;
  bool associated_form_exists = false;

  bool operator==(const InvariantReport&) const = default;
};

struct MismatchCell {
  std::string component;
  double a = 0.0;
  double b = 0.0;
  double deviation = 0.0;

  bool operator==(const MismatchCell&) const = default;
};

struct CompareRow {
  std::vector<double> point_a;
  std::vector<double> point_b;
  double jacobian_det = 0.0;
  std::vector<double> lambdas_a;
  std::vector<double> lambdas_b;
  std::vector<double> mu_a;
  std::vector<double> mu_b;
  double max_deviation = 0.0;
  std::vector<MismatchCell> mismatches;  // at most the first few, in check order

  bool operator==(const CompareRow&) const = default;
};

struct CompareReport {
  std::string name_a;
  std::string name_b;
  double tolerance = 0.0;
  double report_tolerance = 0.0;
  std::vector<CompareRow> rows;
  bool consistent = false;
  std::string verdict;
  std::optional<std::size_t> failing_point;
  std::optional<MismatchCell> first_failure;

  bool operator==(const CompareReport&) const = default;
};

struct AssociatedRow {
  std::vector<double> point;
  std::vector<double> lambdas;
  std::vector<double> required_f2;
  std::optional<double> f;

  bool operator==(const AssociatedRow&) const = default;
};

struct GivenFormCheck {
  bool associated = false;
  double reeb = 0.0;
  double compatibility = 0.0;
  double almost_complex = 0.0;
  double skew_adjoint = 0.0;

  bool operator==(const GivenFormCheck&) const = default;
};

struct PhiTableCell {
  bool matches_table_coordinate = false;
  bool matches_table_frame_order = false;

  bool operator==(const PhiTableCell&) const = default;
};

struct AssociatedReport {
  std::string name;
  int n = 0;
  double tolerance = 0.0;
  std::vector<AssociatedRow> rows;
  bool exists = false;
  std::vector<double> certificate;
  std::optional<std::size_t> obstructed_at;
  std::optional<GivenFormCheck> given_form;
  std::optional<PhiTableCell> phi_table;

  bool operator==(const AssociatedReport&) const = default;
};

void write_json_lines(const InvariantReport& r, std::ostream& out);
void write_json_lines(const CompareReport& r, std::ostream& out);
void write_json_lines(const AssociatedReport& r, std::ostream& out);

void write_table(const InvariantReport& r, std::ostream& out);
void write_table(const CompareReport& r, std::ostream& out);
void write_table(const AssociatedReport& r, std::ostream& out);

/// Throw SchemaError on malformed input.
InvariantReport parse_invariant_report(std::istream& in);
CompareReport parse_compare_report(std::istream& in);
AssociatedReport parse_associated_report(std::istream& in);

}  // namespace srcartan
