#pragma once

// Command layer behind the srcartan tool: builds reports from documents and
// maps library errors to exit codes.
//   0 ok / consistent / exists, 1 input error, 2 geometric degeneracy,
//   3 negative verdict.

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srcartan/compare.hpp"
#include "srcartan/exact_linalg.hpp"
#include "srcartan/report.hpp"
#include "srcartan/spec_file.hpp"

namespace srcartan {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitDegenerate = 2, kExitNegative = 3 };

enum class Format { kTable, kJson };

struct CommandOptions {
  std::optional<double> tol;
  std::optional<double> fd_step;
  std::optional<std::string> points_file;
  Format format = Format::kTable;
  std::optional<std::string> out;
};

inline constexpr double kBuiltinTolerance = 1e-9;

/// Flag, then spec options, then SRCARTAN_TOL, then the built-in default.
double resolve_tolerance(const std::optional<double>& flag, const std::optional<double>& spec);

InvariantReport compute_invariants(const SpecDocument& doc, const ReductionOptions& options);

CompareReport compute_compare(const SpecDocument& a, const SpecDocument& b,
                              const std::vector<sym::Expr>& map,
                              std::span<const std::vector<double>> points, const CompareOptions& options);

AssociatedReport compute_associated(const SubRiemannianSpec& spec,
                                    std::span<const std::vector<double>> points, double tol);

/// Built-in R^5 family; adds the printed phi-table cross-check.
AssociatedReport compute_associated_r5(const std::array<linalg::Rational, 4>& pqrs,
                                       std::span<const std::vector<double>> points, double tol);

int cmd_invariants(const std::string& spec_path, const CommandOptions& options, std::ostream& out,
                   std::ostream& err);
int cmd_compare(const std::string& spec_a, const std::string& spec_b, const std::string& map_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err);
/// Exactly one of `spec_path` and `r5` is set.
int cmd_check_associated(const std::optional<std::string>& spec_path,
                         const std::optional<std::array<std::string, 4>>& r5,
                         const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace srcartan
