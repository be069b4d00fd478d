#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "srcartan/commands.hpp"
#include "srcartan/connection.hpp"
#include "srcartan/contact.hpp"
#include "srcartan/errors.hpp"
#include "srcartan/gstruct.hpp"

namespace srcartan {

namespace {

std::string point_text(std::span<const double> p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
  out << ")";
  return out.str();
}

// Re-throws library errors with the stage (and point) prefixed.
template <class F>
auto staged(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const ContactDegeneracy& e) {
    throw ContactDegeneracy(stage + ": " + e.what());
  } catch (const GeometryError& e) {
    throw GeometryError(stage + ": " + e.what());
  } catch (const InternalConsistencyError& e) {
    throw InternalConsistencyError(stage + ": " + e.what());
  } catch (const EvaluationError& e) {
    throw EvaluationError(stage + ": " + e.what(), e.point());
  }
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= tol * std::max({1.0, std::abs(a[i]), std::abs(b[i])}))) return false;
  }
  return true;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::vector<double>> command_points(const SpecDocument& doc, const CommandOptions& o) {
  if (o.points_file) return load_points_document(*o.points_file, doc.spec.chart.dimension());
  return doc.points;
}

template <class Report>
void render(const Report& r, const CommandOptions& o, std::ostream& out) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (o.out) {
    file.open(*o.out, std::ios::binary);
    if (!file) throw SchemaError("cannot write " + *o.out);
    dest = &file;
  }
  if (o.format == Format::kJson) {
    write_json_lines(r, *dest);
  } else {
    write_table(r, *dest);
  }
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    err << "srcartan: parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SchemaError& e) {
    err << "srcartan: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const EvaluationError& e) {
    err << "srcartan: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ContactDegeneracy& e) {
    err << "srcartan: contact condition eta ^ (d eta)^n != 0 fails: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const GeometryError& e) {
    err << "srcartan: degenerate geometry: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const InternalConsistencyError& e) {
    err << "srcartan: internal consistency check failed: " << e.what() << '\n';
    return kExitDegenerate;
  }
}

ReductionOptions reduction_options(const SpecDocument& doc, const CommandOptions& o) {
  ReductionOptions r;
  r.tol = resolve_tolerance(o.tol, doc.options.tolerance);
  if (o.fd_step) {
    r.fd_step = *o.fd_step;
  } else if (doc.options.fd_step) {
    r.fd_step = *doc.options.fd_step;
  }
  if (!(r.tol > 0) || !(r.fd_step > 0)) throw SchemaError("tolerance and fd step must be positive");
  return r;
}

}  // namespace

double resolve_tolerance(const std::optional<double>& flag, const std::optional<double>& spec) {
  if (flag) return *flag;
  if (spec) return *spec;
  if (const char* env = std::getenv("SRCARTAN_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) throw SchemaError("SRCARTAN_TOL is not a positive number");
    return v;
  }
  return kBuiltinTolerance;
}

InvariantReport compute_invariants(const SpecDocument& doc, const ReductionOptions& options) {
  const auto& points = doc.points;
  const CoframeField cf = staged("adapted coframe", [&] { return adapted_coframe(doc.spec, points, options.tol); });
  const Reducer reducer(cf, options);
  const ComplementModel model = invariant_complement(cf.n());
  const auto gd = static_cast<Eigen::Index>(model.gamma_dim());
  const auto cd = static_cast<Eigen::Index>(model.complement.dim());

  InvariantReport r;
  r.name = doc.spec.name;
  r.n = cf.n();
  r.dimension = cf.dim();
  r.tolerance = options.tol;
  r.fd_step = options.fd_step;
  r.gram = doc.options.gram;
  r.complement_dim = model.complement.dim();
  r.dropped_points = doc.dropped_points;

  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto inv = staged("reduction and connection at " + point_text(points[k]),
                            [&] { return point_invariants(reducer, model, points[k]); });
    InvariantRow row;
    row.point = points[k];
    row.lambdas = inv.reduction.lambdas;
    row.mu = inv.reduction.mu;
    row.b_shift = to_vector(inv.reduction.b_shift);
    const Eigen::VectorXd coords = model.splitting_d * flatten(r.n, inv.connection.torsion);
    row.torsion = to_vector(coords.segment(gd, cd));
    const Eigen::MatrixXd& k_comp = inv.curvature.components;
    for (Eigen::Index i = 0; i < k_comp.rows(); ++i)
      for (Eigen::Index j = 0; j < k_comp.cols(); ++j) row.curvature.push_back(k_comp(i, j));
    row.stabilizer_dim = inv.reduction.stabilizer_dim;
    r.rows.push_back(std::move(row));
  }
  const AssociatedSearch search =
      staged("associated form search", [&] { return search_associated_form(cf, points, options.tol); });
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& sp = search.points[k];
    auto& cm = r.rows[k].contact_metric;
    cm.exists = sp.f.has_value();
    cm.f = sp.f;
    cm.required_f2 = sp.required_f2;
  }

  constexpr double kInvariantTol = 1e-6;
  r.constant_invariants = true;
  for (const auto& row : r.rows) {
    const auto& first = r.rows.front();
    if (!close(row.mu, first.mu, kInvariantTol) || !close(row.torsion, first.torsion, kInvariantTol) ||
        !close(row.curvature, first.curvature, kInvariantTol)) {
      r.constant_invariants = false;
    }
    if (std::find(r.stabilizer_dims.begin(), r.stabilizer_dims.end(), row.stabilizer_dim) ==
        r.stabilizer_dims.end()) {
      r.stabilizer_dims.push_back(row.stabilizer_dim);
    }
  }
  std::sort(r.stabilizer_dims.begin(), r.stabilizer_dims.end());
  r.single_stratum = r.stabilizer_dims.size() == 1;
  r.associated_form_exists = search.exists;
  return r;
}

CompareReport compute_compare(const SpecDocument& a, const SpecDocument& b,
                              const std::vector<sym::Expr>& map,
                              std::span<const std::vector<double>> points, const CompareOptions& options) {
  const EquivalenceVerdict v =
      staged("compare", [&] { return compare_structures(a.spec, b.spec, map, points, options); });
  constexpr std::size_t kMismatchesPerRow = 8;
  CompareReport r;
  r.name_a = a.spec.name;
  r.name_b = b.spec.name;
  r.tolerance = options.reduction.tol;
  r.report_tolerance = options.report_tol;
  for (const auto& pc : v.points) {
    CompareRow row;
    row.point_a = pc.point_a;
    row.point_b = pc.point_b;
    row.jacobian_det = pc.jacobian_det;
    row.lambdas_a = pc.a.reduction.lambdas;
    row.lambdas_b = pc.b.reduction.lambdas;
    row.mu_a = pc.a.reduction.mu;
    row.mu_b = pc.b.reduction.mu;
    row.max_deviation = pc.max_deviation;
    for (std::size_t i = 0; i < std::min(kMismatchesPerRow, pc.mismatches.size()); ++i) {
      const auto& m = pc.mismatches[i];
      row.mismatches.push_back({m.component, m.value_a, m.value_b, m.deviation});
    }
    r.rows.push_back(std::move(row));
  }
  r.consistent = v.consistent;
  r.verdict = v.label();
  r.failing_point = v.failing_point;
  if (v.first_failure) {
    const auto& m = *v.first_failure;
    r.first_failure = MismatchCell{m.component, m.value_a, m.value_b, m.deviation};
  }
  return r;
}

AssociatedReport compute_associated(const SubRiemannianSpec& spec,
                                    std::span<const std::vector<double>> points, double tol) {
  const CoframeField cf = staged("adapted coframe", [&] { return adapted_coframe(spec, points, tol); });
  const AssociatedSearch search =
      staged("associated form search", [&] { return search_associated_form(cf, points, tol); });
  AssociatedReport r;
  r.name = spec.name;
  r.n = cf.n();
  r.tolerance = tol;
  for (const auto& sp : search.points) r.rows.push_back({sp.point, sp.lambdas, sp.required_f2, sp.f});
  r.exists = search.exists;
  r.certificate = search.certificate;
  r.obstructed_at = search.obstructed_at;
  const auto verdict = staged("contact metric of the given eta", [&] {
    return check_associated(build_contact_metric(cf, spec.eta, points, tol), points, tol);
  });
  r.given_form = GivenFormCheck{verdict.associated, verdict.worst.reeb, verdict.worst.compatibility,
                                verdict.worst.almost_complex, verdict.worst.skew_adjoint};
  return r;
}

AssociatedReport compute_associated_r5(const std::array<linalg::Rational, 4>& pqrs,
                                       std::span<const std::vector<double>> points, double tol) {
  const auto& [p, q, r, s] = pqrs;
  AssociatedReport out = compute_associated(r5_example(p, q, r, s), points, tol);
  const auto& at = points.front();
  out.phi_table = PhiTableCell{phi_table_check(p, q, r, s, 1.0, at, false, tol).matches_table,
                               phi_table_check(p, q, r, s, 1.0, at, true, tol).matches_table};
  return out;
}

int cmd_invariants(const std::string& spec_path, const CommandOptions& options, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    SpecDocument doc = load_spec_document(spec_path);
    doc.points = command_points(doc, options);
    const InvariantReport r = compute_invariants(doc, reduction_options(doc, options));
    render(r, options, out);
    return kExitOk;
  });
}

int cmd_compare(const std::string& spec_a, const std::string& spec_b, const std::string& map_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpecDocument a = load_spec_document(spec_a);
    const SpecDocument b = load_spec_document(spec_b);
    const auto map = load_map_document(map_path, a.spec.chart);
    const auto points = command_points(a, options);
    CompareOptions co;
    co.reduction = reduction_options(a, options);
    const CompareReport r = compute_compare(a, b, map, points, co);
    render(r, options, out);
    return r.consistent ? kExitOk : kExitNegative;
  });
}

int cmd_check_associated(const std::optional<std::string>& spec_path,
                         const std::optional<std::array<std::string, 4>>& r5,
                         const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (spec_path.has_value() == r5.has_value()) {
      throw SchemaError("give either a spec file or --r5 p q r s");
    }
    AssociatedReport r;
    if (spec_path) {
      SpecDocument doc = load_spec_document(*spec_path);
      const auto points = command_points(doc, options);
      r = compute_associated(doc.spec, points, reduction_options(doc, options).tol);
    } else {
      std::array<linalg::Rational, 4> pqrs;
      for (std::size_t i = 0; i < 4; ++i) pqrs[i] = sym::parse_rational((*r5)[i]);
      const SubRiemannianSpec spec = r5_example(pqrs[0], pqrs[1], pqrs[2], pqrs[3]);
      const auto points = options.points_file ? load_points_document(*options.points_file, 5)
                                              : default_points(spec);
      r = compute_associated_r5(pqrs, points, resolve_tolerance(options.tol, std::nullopt));
    }
    render(r, options, out);
    return r.exists ? kExitOk : kExitNegative;
  });
}

}  // namespace srcartan
