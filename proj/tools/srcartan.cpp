#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srcartan/commands.hpp"

namespace {

struct Shared {
  std::optional<double> tol;
  std::optional<double> fd_step;
  std::optional<std::string> points;
  std::string format = "table";
  std::optional<std::string> out;

  void attach(CLI::App* app, bool fd) {
    app->add_option("--tol", tol, "numerical tolerance (default: SRCARTAN_TOL or 1e-9)")
        ->check(CLI::PositiveNumber);
    if (fd) app->add_option("--fd-step", fd_step, "finite-difference step")->check(CLI::PositiveNumber);
    app->add_option("--points", points, "JSON file with sample points");
    app->add_option("--format", format, "report format")->check(CLI::IsMember({"table", "json"}));
    app->add_option("--out", out, "write the report to this file");
  }

  srcartan::CommandOptions options() const {
    srcartan::CommandOptions o;
    o.tol = tol;
    o.fd_step = fd_step;
    o.points_file = points;
    o.format = format == "json" ? srcartan::Format::kJson : srcartan::Format::kTable;
    o.out = out;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan equivalence invariants of contact sub-Riemannian structures"};
  app.require_subcommand(1);

  Shared inv_opts, cmp_opts, assoc_opts;
  std::string spec, spec_a, spec_b, map;
  std::optional<std::string> assoc_spec;
  std::vector<std::string> r5;

  auto* inv = app.add_subcommand("invariants", "reduce, connect and report invariants per point");
  inv->add_option("spec", spec, "structure specification (JSON)")->required();
  inv_opts.attach(inv, true);

  auto* cmp = app.add_subcommand("compare", "compare two structures under a candidate map");
  cmp->add_option("A", spec_a, "source structure")->required();
  cmp->add_option("B", spec_b, "target structure")->required();
  cmp->add_option("--map", map, "JSON file with the map A -> B")->required();
  cmp_opts.attach(cmp, true);

  auto* assoc = app.add_subcommand("check-associated", "search for an associated contact metric");
  auto* spec_opt = assoc->add_option("spec", assoc_spec, "structure specification (JSON)");
  auto* r5_opt = assoc->add_option("--r5", r5, "built-in R^5 example with metric p q r s")
                     ->expected(4)
                     ->excludes(spec_opt);
  spec_opt->excludes(r5_opt);
  assoc_opts.attach(assoc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? srcartan::kExitOk : srcartan::kExitInput;
  }

  if (inv->parsed()) return srcartan::cmd_invariants(spec, inv_opts.options(), std::cout, std::cerr);
  if (cmp->parsed()) {
    return srcartan::cmd_compare(spec_a, spec_b, map, cmp_opts.options(), std::cout, std::cerr);
  }
  std::optional<std::array<std::string, 4>> builtin;
  if (!r5.empty()) builtin = std::array<std::string, 4>{r5[0], r5[1], r5[2], r5[3]};
  return srcartan::cmd_check_associated(assoc_spec, builtin, assoc_opts.options(), std::cout, std::cerr);
}
