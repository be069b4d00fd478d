#pragma once

// JSON structure-specification documents.
//
//   {
//     "name": "heisenberg",
//     "chart": ["x", "y", "z"],                 // or {"dimension": 3, "variables": [...]}
//     "parameters": {"k": "4"},                 // optional rational constants
//     "eta": "dz + x*dy",                       // or a coefficient list ["0", "x", "1"]
//     "metric": {"frame": [[...], ...], "gram": [[...], ...]}
//            or {"coframe": ["dx", "dy"]},
//     "points": {"list": [[0, 0, 0]], "lattice": {"min": -1, "max": 1, "count": 3}},
//     "options": {"tolerance": 1e-9, "fd_step": 1e-4, "gram": "identity"}
//   }
//
// Without "points" the default lattice (3 per axis on [-1, 1]) is used and
// lattice points where some expression cannot be evaluated are dropped.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srcartan/reduction.hpp"

namespace srcartan {

struct SpecOptions {
  std::optional<double> tolerance;
  std::optional<double> fd_step;
  std::string gram = "identity";
};

struct SpecDocument {
  SubRiemannianSpec spec;
  std::vector<std::vector<double>> points;
  std::size_t dropped_points = 0;  // lattice points outside the domain
  SpecOptions options;
};

/// Throws SchemaError for layout problems and ParseError for bad expressions.
SpecDocument parse_spec_document(std::string_view json_text);
SpecDocument load_spec_document(const std::filesystem::path& path);

/// Points file: {"points": [[...], ...]} or a bare list, or the same
/// "list"/"lattice" object accepted in spec documents.
std::vector<std::vector<double>> parse_points_document(std::string_view json_text, std::size_t dim);
std::vector<std::vector<double>> load_points_document(const std::filesystem::path& path,
                                                      std::size_t dim);

/// Map file {"map": ["x + 1", "y", "z - y"]}: target coordinates as
/// expressions in the source chart.
std::vector<sym::Expr> parse_map_document(std::string_view json_text, const sym::Chart& source);
std::vector<sym::Expr> load_map_document(const std::filesystem::path& path, const sym::Chart& source);

/// Lattice points of `spec` where every coefficient evaluates to a finite value.
std::vector<std::vector<double>> default_points(const SubRiemannianSpec& spec, double lo = -1.0,
                                                double hi = 1.0, int count = 3,
                                                std::size_t* dropped = nullptr);

}  // namespace srcartan
