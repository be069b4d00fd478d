#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "srcartan/errors.hpp"
#include "srcartan/report.hpp"

namespace srcartan {

namespace {

using Json = nlohmann::ordered_json;

// ---- writing ---------------------------------------------------------------

double finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InternalConsistencyError(std::string("non-finite ") + what + " in report");
  return x;
}

Json numbers(const std::vector<double>& v, const char* what) {
  Json out = Json::array();
  for (const double x : v) out.push_back(finite(x, what));
  return out;
}

template <class T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json mismatch_json(const MismatchCell& m) {
  return Json{{"component", m.component},
              {"a", finite(m.a, "mismatch")},
              {"b", finite(m.b, "mismatch")},
              {"deviation", finite(m.deviation, "mismatch")}};
}

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

// ---- parsing ---------------------------------------------------------------

struct Lines {
  Json meta;
  std::vector<Json> rows;
  Json summary;
};

Lines read_lines(std::istream& in, const std::string& command) {
  Lines out;
  std::string line;
  bool have_meta = false, have_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw SchemaError(std::string("report: ") + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "meta") {
      if (j.value("command", "") != command) throw SchemaError("report: not a " + command + " report");
      out.meta = std::move(j);
      have_meta = true;
    } else if (type == "row") {
      out.rows.push_back(std::move(j));
    } else if (type == "summary") {
      out.summary = std::move(j);
      have_summary = true;
    } else {
      throw SchemaError("report: unknown line type '" + type + "'");
    }
  }
  if (!have_meta || !have_summary) throw SchemaError("report: missing meta or summary line");
  return out;
}

template <class T>
std::optional<T> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

MismatchCell read_mismatch(const Json& j) {
  return {j.at("component").get<std::string>(), j.at("a").get<double>(), j.at("b").get<double>(),
          j.at("deviation").get<double>()};
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

// ---- tables ----------------------------------------------------------------

std::string num(double x) {
  std::ostringstream out;
  out << std::setprecision(6) << (std::abs(x) < 5e-13 ? 0.0 : x);
  return out.str();
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

void table(std::ostream& out, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  const auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << s << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (const auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

// ---- invariants --------------------------------------------------------------

void write_json_lines(const InvariantReport& r, std::ostream& out) {
  emit(out, Json{{"type", "meta"},
                 {"command", "invariants"},
                 {"name", r.name},
                 {"n", r.n},
                 {"dimension", r.dimension},
                 {"tolerance", r.tolerance},
                 {"fd_step", r.fd_step},
                 {"gram", r.gram},
                 {"complement_dim", r.complement_dim},
                 {"dropped_points", r.dropped_points}});
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    emit(out, Json{{"type", "row"},
                   {"index", k},
                   {"point", numbers(row.point, "point")},
                   {"lambdas", numbers(row.lambdas, "lambda")},
                   {"mu", numbers(row.mu, "mu")},
                   {"b_shift", numbers(row.b_shift, "b_shift")},
                   {"torsion", numbers(row.torsion, "torsion")},
                   {"curvature", numbers(row.curvature, "curvature")},
                   {"stabilizer_dim", row.stabilizer_dim},
                   {"contact_metric",
                    Json{{"exists", row.contact_metric.exists},
                         {"f", optional_value(row.contact_metric.f)},
                         {"required_f2", numbers(row.contact_metric.required_f2, "f^2")}}}});
  }
  emit(out, Json{{"type", "summary"},
                 {"rows", r.rows.size()},
                 {"constant_invariants", r.constant_invariants},
                 {"stabilizer_dims", r.stabilizer_dims},
                 {"single_stratum", r.single_stratum},
                 {"associated_form", r.associated_form_exists ? "exists" : "obstructed"}});
}

InvariantReport parse_invariant_report(std::istream& in) {
  const Lines l = read_lines(in, "invariants");
  return guarded([&] {
    InvariantReport r;
    r.name = l.meta.at("name").get<std::string>();
    r.n = l.meta.at("n").get<int>();
    r.dimension = l.meta.at("dimension").get<std::size_t>();
    r.tolerance = l.meta.at("tolerance").get<double>();
    r.fd_step = l.meta.at("fd_step").get<double>();
    r.gram = l.meta.at("gram").get<std::string>();
    r.complement_dim = l.meta.at("complement_dim").get<std::size_t>();
    r.dropped_points = l.meta.at("dropped_points").get<std::size_t>();
    for (const auto& j : l.rows) {
      InvariantRow row;
      row.point = j.at("point").get<std::vector<double>>();
      row.lambdas = j.at("lambdas").get<std::vector<double>>();
      row.mu = j.at("mu").get<std::vector<double>>();
      row.b_shift = j.at("b_shift").get<std::vector<double>>();
      row.torsion = j.at("torsion").get<std::vector<double>>();
      row.curvature = j.at("curvature").get<std::vector<double>>();
      row.stabilizer_dim = j.at("stabilizer_dim").get<std::size_t>();
      const Json& cm = j.at("contact_metric");
      row.contact_metric.exists = cm.at("exists").get<bool>();
      row.contact_metric.f = read_optional<double>(cm, "f");
      row.contact_metric.required_f2 = cm.at("required_f2").get<std::vector<double>>();
      r.rows.push_back(std::move(row));
    }
    if (l.summary.at("rows").get<std::size_t>() != r.rows.size()) {
      throw SchemaError("report: row count does not match the summary");
    }
    r.constant_invariants = l.summary.at("constant_invariants").get<bool>();
    r.stabilizer_dims = l.summary.at("stabilizer_dims").get<std::vector<std::size_t>>();
    r.single_stratum = l.summary.at("single_stratum").get<bool>();
    r.associated_form_exists = l.summary.at("associated_form").get<std::string>() == "exists";
    return r;
  });
}

void write_table(const InvariantReport& r, std::ostream& out) {
  out << r.name << ": n = " << r.n << ", tolerance " << num(r.tolerance) << ", fd step "
      << num(r.fd_step) << ", gram " << r.gram << ", dim C = " << r.complement_dim << "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    const auto& cm = row.contact_metric;
    rows.push_back({std::to_string(k), list(row.point), list(row.lambdas), list(row.mu),
                    list(row.b_shift), std::to_string(row.stabilizer_dim), num(norm(row.torsion)),
                    num(norm(row.curvature)),
                    cm.exists ? "f = " + num(*cm.f) : "obstructed " + list(cm.required_f2)});
  }
  table(out, {"#", "point", "lambda", "mu", "b", "stab", "|T|", "|R|", "associated"}, rows);
  out << "\nrows " << r.rows.size();
  if (r.dropped_points) out << " (" << r.dropped_points << " lattice points outside the domain)";
  out << "\nconstant invariants: " << yes_no(r.constant_invariants) << "\nstabilizer dims:";
  for (const auto s : r.stabilizer_dims) out << ' ' << s;
  out << (r.single_stratum ? " (single stratum)" : " (mixed strata)")
      << "\nassociated form: " << (r.associated_form_exists ? "exists" : "obstructed") << '\n';
}

// ---- compare -----------------------------------------------------------------

void write_json_lines(const CompareReport& r, std::ostream& out) {
  emit(out, Json{{"type", "meta"},
                 {"command", "compare"},
                 {"name_a", r.name_a},
                 {"name_b", r.name_b},
                 {"tolerance", r.tolerance},
                 {"report_tolerance", r.report_tolerance}});
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    Json mm = Json::array();
    for (const auto& m : row.mismatches) mm.push_back(mismatch_json(m));
    emit(out, Json{{"type", "row"},
                   {"index", k},
                   {"point_a", numbers(row.point_a, "point")},
                   {"point_b", numbers(row.point_b, "point")},
                   {"jacobian_det", finite(row.jacobian_det, "jacobian")},
                   {"lambdas_a", numbers(row.lambdas_a, "lambda")},
                   {"lambdas_b", numbers(row.lambdas_b, "lambda")},
                   {"mu_a", numbers(row.mu_a, "mu")},
                   {"mu_b", numbers(row.mu_b, "mu")},
                   {"max_deviation", finite(row.max_deviation, "deviation")},
                   {"mismatches", mm}});
  }
  emit(out, Json{{"type", "summary"},
                 {"rows", r.rows.size()},
                 {"verdict", r.verdict},
                 {"consistent", r.consistent},
                 {"failing_point", optional_value(r.failing_point)},
                 {"first_failure", r.first_failure ? mismatch_json(*r.first_failure) : Json(nullptr)}});
}

CompareReport parse_compare_report(std::istream& in) {
  const Lines l = read_lines(in, "compare");
  return guarded([&] {
    CompareReport r;
    r.name_a = l.meta.at("name_a").get<std::string>();
    r.name_b = l.meta.at("name_b").get<std::string>();
    r.tolerance = l.meta.at("tolerance").get<double>();
    r.report_tolerance = l.meta.at("report_tolerance").get<double>();
    for (const auto& j : l.rows) {
      CompareRow row;
      row.point_a = j.at("point_a").get<std::vector<double>>();
      row.point_b = j.at("point_b").get<std::vector<double>>();
      row.jacobian_det = j.at("jacobian_det").get<double>();
      row.lambdas_a = j.at("lambdas_a").get<std::vector<double>>();
      row.lambdas_b = j.at("lambdas_b").get<std::vector<double>>();
      row.mu_a = j.at("mu_a").get<std::vector<double>>();
      row.mu_b = j.at("mu_b").get<std::vector<double>>();
      row.max_deviation = j.at("max_deviation").get<double>();
      for (const auto& m : j.at("mismatches")) row.mismatches.push_back(read_mismatch(m));
      r.rows.push_back(std::move(row));
    }
    if (l.summary.at("rows").get<std::size_t>() != r.rows.size()) {
      throw SchemaError("report: row count does not match the summary");
    }
    r.verdict = l.summary.at("verdict").get<std::string>();
    r.consistent = l.summary.at("consistent").get<bool>();
    r.failing_point = read_optional<std::size_t>(l.summary, "failing_point");
    if (!l.summary.at("first_failure").is_null()) r.first_failure = read_mismatch(l.summary.at("first_failure"));
    return r;
  });
}

void write_table(const CompareReport& r, std::ostream& out) {
  out << r.name_a << " -> " << r.name_b << ": report tolerance " << num(r.report_tolerance) << "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    rows.push_back({std::to_string(k), list(row.point_a), list(row.point_b), num(row.jacobian_det),
                    list(row.mu_a), list(row.mu_b), num(row.lambdas_a.front()), num(row.lambdas_b.front()),
                    num(row.max_deviation),
                    row.mismatches.empty() ? "-" : row.mismatches.front().component});
  }
  table(out, {"#", "point A", "point B", "det J", "mu A", "mu B", "lambda1 A", "lambda1 B", "max dev",
              "first mismatch"},
        rows);
  out << "\nverdict: " << r.verdict << '\n';
  if (r.first_failure) {
    const auto& f = *r.first_failure;
    out << "first failing component: " << f.component << " at point " << *r.failing_point << " ("
        << num(f.a) << " against " << num(f.b) << ", relative deviation " << num(f.deviation) << ")\n";
  }
}

// ---- check-associated ----------------------------------------------------------

void write_json_lines(const AssociatedReport& r, std::ostream& out) {
  emit(out, Json{{"type", "meta"},
                 {"command", "check-associated"},
                 {"name", r.name},
                 {"n", r.n},
                 {"tolerance", r.tolerance}});
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    emit(out, Json{{"type", "row"},
                   {"index", k},
                   {"point", numbers(row.point, "point")},
                   {"lambdas", numbers(row.lambdas, "lambda")},
                   {"required_f2", numbers(row.required_f2, "f^2")},
                   {"f", optional_value(row.f)}});
  }
  Json summary{{"type", "summary"},
               {"rows", r.rows.size()},
               {"exists", r.exists},
               {"certificate", numbers(r.certificate, "certificate")},
               {"obstructed_at", optional_value(r.obstructed_at)}};
  if (r.given_form) {
    const auto& g = *r.given_form;
    summary["given_form"] = Json{{"associated", g.associated},
                                 {"reeb", finite(g.reeb, "residual")},
                                 {"compatibility", finite(g.compatibility, "residual")},
                                 {"almost_complex", finite(g.almost_complex, "residual")},
                                 {"skew_adjoint", finite(g.skew_adjoint, "residual")}};
  } else {
    summary["given_form"] = nullptr;
  }
  if (r.phi_table) {
    summary["phi_table"] = Json{{"matches_table_coordinate", r.phi_table->matches_table_coordinate},
                                {"matches_table_frame_order", r.phi_table->matches_table_frame_order}};
  } else {
    summary["phi_table"] = nullptr;
  }
  emit(out, summary);
}

AssociatedReport parse_associated_report(std::istream& in) {
  const Lines l = read_lines(in, "check-associated");
  return guarded([&] {
    AssociatedReport r;
    r.name = l.meta.at("name").get<std::string>();
    r.n = l.meta.at("n").get<int>();
    r.tolerance = l.meta.at("tolerance").get<double>();
    for (const auto& j : l.rows) {
      AssociatedRow row;
      row.point = j.at("point").get<std::vector<double>>();
      row.lambdas = j.at("lambdas").get<std::vector<double>>();
      row.required_f2 = j.at("required_f2").get<std::vector<double>>();
      row.f = read_optional<double>(j, "f");
      r.rows.push_back(std::move(row));
    }
    if (l.summary.at("rows").get<std::size_t>() != r.rows.size()) {
      throw SchemaError("report: row count does not match the summary");
    }
    r.exists = l.summary.at("exists").get<bool>();
    r.certificate = l.summary.at("certificate").get<std::vector<double>>();
    r.obstructed_at = read_optional<std::size_t>(l.summary, "obstructed_at");
    if (const Json& g = l.summary.at("given_form"); !g.is_null()) {
      r.given_form = GivenFormCheck{g.at("associated").get<bool>(), g.at("reeb").get<double>(),
                                    g.at("compatibility").get<double>(),
                                    g.at("almost_complex").get<double>(),
                                    g.at("skew_adjoint").get<double>()};
    }
    if (const Json& p = l.summary.at("phi_table"); !p.is_null()) {
      r.phi_table = PhiTableCell{p.at("matches_table_coordinate").get<bool>(),
                                 p.at("matches_table_frame_order").get<bool>()};
    }
    return r;
  });
}

void write_table(const AssociatedReport& r, std::ostream& out) {
  out << r.name << ": n = " << r.n << ", tolerance " << num(r.tolerance) << "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    rows.push_back({std::to_string(k), list(row.point), list(row.lambdas), list(row.required_f2),
                    row.f ? num(*row.f) : "-"});
  }
  table(out, {"#", "point", "lambda", "required f^2", "f"}, rows);
  out << '\n';
  if (r.exists) {
    out << "associated contact form exists at every sample point (eta = f alpha, f = 1 / lambda1)\n";
  } else {
    out << "obstructed at point " << *r.obstructed_at << ": phi^2 = -id on D needs f^2 in "
        << list(r.certificate) << " simultaneously\n";
  }
  if (r.given_form) {
    const auto& g = *r.given_form;
    out << "given eta: " << (g.associated ? "associated" : "not associated") << " (residuals: reeb "
        << num(g.reeb) << ", compatibility " << num(g.compatibility) << ", phi^2 "
        << num(g.almost_complex) << ", skew " << num(g.skew_adjoint) << ")\n";
  }
  if (r.phi_table) {
    out << "printed phi table: coordinate reading " << yes_no(r.phi_table->matches_table_coordinate)
        << ", frame-order reading " << yes_no(r.phi_table->matches_table_frame_order) << '\n';
  }
}

}  // namespace srcartan
