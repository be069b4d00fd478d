#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "srcartan/errors.hpp"
#include "srcartan/spec_file.hpp"

namespace srcartan {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

std::string expr_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream out;
    out.precision(17);
    out << v.get<double>();
    return out.str();
  }
  throw SchemaError(where + ": expected an expression string");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  return v.get<double>();
}

std::vector<sym::Expr> expr_row(const json& v, const sym::Chart& chart, const sym::Bindings& b,
                                const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + ": expected a list");
  std::vector<sym::Expr> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(sym::parse(expr_text(v[i], where), chart, b));
  }
  return out;
}

sym::OneForm one_form(const json& v, const sym::Chart& chart, const sym::Bindings& b,
                      const std::string& where) {
  if (v.is_string()) return sym::parse_one_form(v.get<std::string>(), chart, b);
  sym::OneForm w(chart.dimension());
  const auto row = expr_row(v, chart, b, where);
  if (row.size() != chart.dimension()) {
    throw SchemaError(where + ": expected " + std::to_string(chart.dimension()) + " coefficients");
  }
  w.coeffs = row;
  return w;
}

sym::Chart parse_chart(const json& v) {
  std::vector<std::string> names;
  const json* list = &v;
  if (v.is_object()) list = &require(v, "variables", "chart");
  if (!list->is_array()) throw SchemaError("chart: expected a list of variable names");
  for (const auto& n : *list) {
    if (!n.is_string()) throw SchemaError("chart: variable names must be strings");
    names.push_back(n.get<std::string>());
  }
  if (v.is_object() && v.contains("dimension") &&
      v.at("dimension").get<std::size_t>() != names.size()) {
    throw SchemaError("chart: dimension does not match the variable list");
  }
  if (names.size() < 3 || names.size() % 2 == 0) {
    throw SchemaError("chart: dimension must be odd and at least 3");
  }
  return sym::Chart(names);
}

sym::Bindings parse_parameters(const json& doc) {
  sym::Bindings b;
  if (!doc.contains("parameters")) return b;
  const json& p = doc.at("parameters");
  if (!p.is_object()) throw SchemaError("parameters: expected an object");
  for (const auto& [key, value] : p.items()) {
    b.emplace(key, sym::parse_rational(expr_text(value, "parameters." + key)));
  }
  return b;
}

std::vector<std::vector<double>> lattice(std::size_t dim, double lo, double hi, int count) {
  std::vector<std::vector<double>> out{{}};
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<std::vector<double>> next;
    for (const auto& p : out) {
      for (int i = 0; i < count; ++i) {
        auto q = p;
        q.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

struct PointsBlock {
  std::vector<std::vector<double>> list;
  std::optional<std::array<double, 2>> range;
  int count = 3;
};

PointsBlock parse_points_block(const json& v, std::size_t dim) {
  PointsBlock out;
  const json* list = nullptr;
  if (v.is_array()) {
    list = &v;
  } else if (v.is_object()) {
    if (v.contains("list")) list = &v.at("list");
    if (v.contains("points")) list = &v.at("points");
    if (v.contains("lattice")) {
      const json& l = v.at("lattice");
      const double lo = l.contains("min") ? number(l.at("min"), "lattice.min") : -1.0;
      const double hi = l.contains("max") ? number(l.at("max"), "lattice.max") : 1.0;
      out.count = l.contains("count") ? l.at("count").get<int>() : 3;
      if (out.count < 1 || !(lo <= hi)) throw SchemaError("lattice: need count >= 1 and min <= max");
      out.range = std::array<double, 2>{lo, hi};
    }
    if (!list && !out.range) throw SchemaError("points: expected \"list\" and/or \"lattice\"");
  } else {
    throw SchemaError("points: expected a list or an object");
  }
  if (list) {
    if (!list->is_array()) throw SchemaError("points: expected a list of coordinate lists");
    for (const auto& p : *list) {
      if (!p.is_array() || p.size() != dim) {
        throw SchemaError("points: each point needs " + std::to_string(dim) + " coordinates");
      }
      std::vector<double> q;
      for (const auto& x : p) q.push_back(number(x, "points"));
      out.list.push_back(std::move(q));
    }
  }
  return out;
}

bool evaluates(const SubRiemannianSpec& spec, std::span<const double> p) {
  const auto finite = [&](const sym::Expr& e) { return std::isfinite(sym::eval(e, p)); };
  try {
    for (const auto& c : spec.eta.coeffs)
      if (!finite(c)) return false;
    if (const auto* fm = std::get_if<FrameMetric>(&spec.metric)) {
      for (const auto& row : fm->frame)
        for (const auto& c : row)
          if (!finite(c)) return false;
      for (const auto& row : fm->gram)
        for (const auto& c : row)
          if (!finite(c)) return false;
    } else {
      for (const auto& f : std::get<DeclaredCoframe>(spec.metric).forms)
        for (const auto& c : f.coeffs)
          if (!finite(c)) return false;
    }
  } catch (const EvaluationError&) {
    return false;
  }
  return true;
}

std::vector<std::vector<double>> resolve_points(const SubRiemannianSpec& spec, const PointsBlock& block,
                                                std::size_t* dropped) {
  std::vector<std::vector<double>> out = block.list;
  if (block.range) {
    std::size_t d = 0;
    for (auto& p : default_points(spec, (*block.range)[0], (*block.range)[1], block.count, &d)) {
      out.push_back(std::move(p));
    }
    if (dropped) *dropped = d;
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> default_points(const SubRiemannianSpec& spec, double lo, double hi,
                                                int count, std::size_t* dropped) {
  std::vector<std::vector<double>> out;
  std::size_t d = 0;
  for (auto& p : lattice(spec.chart.dimension(), lo, hi, count)) {
    if (evaluates(spec, p)) {
      out.push_back(std::move(p));
    } else {
      ++d;
    }
  }
  if (dropped) *dropped = d;
  return out;
}

namespace {

SpecDocument parse_spec(const json& doc) {
  if (!doc.is_object()) throw SchemaError("spec: expected a JSON object");
  SpecDocument out;
  SubRiemannianSpec& spec = out.spec;
  spec.name = doc.contains("name") ? doc.at("name").get<std::string>() : "unnamed";
  spec.chart = parse_chart(require(doc, "chart", "spec"));
  const sym::Bindings b = parse_parameters(doc);
  spec.eta = one_form(require(doc, "eta", "spec"), spec.chart, b, "eta");

  const json& metric = require(doc, "metric", "spec");
  if (metric.contains("frame")) {
    FrameMetric fm;
    const json& frame = metric.at("frame");
    if (!frame.is_array()) throw SchemaError("metric.frame: expected a list of vector fields");
    for (const auto& v : frame) fm.frame.push_back(expr_row(v, spec.chart, b, "metric.frame"));
    const json& gram = require(metric, "gram", "metric");
    if (!gram.is_array()) throw SchemaError("metric.gram: expected a matrix");
    for (const auto& r : gram) fm.gram.push_back(expr_row(r, spec.chart, b, "metric.gram"));
    spec.metric = std::move(fm);
  } else if (metric.contains("coframe")) {
    DeclaredCoframe dc;
    const json& forms = metric.at("coframe");
    if (!forms.is_array()) throw SchemaError("metric.coframe: expected a list of one-forms");
    for (const auto& f : forms) dc.forms.push_back(one_form(f, spec.chart, b, "metric.coframe"));
    spec.metric = std::move(dc);
  } else {
    throw SchemaError("metric: expected \"frame\" + \"gram\" or \"coframe\"");
  }
  spec.validate_shape();

  if (doc.contains("options")) {
    const json& o = doc.at("options");
    if (!o.is_object()) throw SchemaError("options: expected an object");
    if (o.contains("tolerance")) out.options.tolerance = number(o.at("tolerance"), "options.tolerance");
    if (o.contains("fd_step")) out.options.fd_step = number(o.at("fd_step"), "options.fd_step");
    if (o.contains("gram")) {
      out.options.gram = o.at("gram").get<std::string>();
      if (out.options.gram != "identity") {
        throw SchemaError("options.gram: only \"identity\" is supported");
      }
    }
  }

  if (doc.contains("points")) {
    out.points = resolve_points(spec, parse_points_block(doc.at("points"), spec.chart.dimension()),
                                &out.dropped_points);
  } else {
    out.points = default_points(spec, -1.0, 1.0, 3, &out.dropped_points);
  }
  if (out.points.empty()) throw SchemaError("points: no usable sample points");
  return out;
}

}  // namespace

SpecDocument parse_spec_document(std::string_view json_text) {
  const json doc = parse_json(json_text);
  try {
    return parse_spec(doc);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("spec: ") + e.what());
  }
}

SpecDocument load_spec_document(const std::filesystem::path& path) {
  return parse_spec_document(read_file(path));
}

std::vector<std::vector<double>> parse_points_document(std::string_view json_text, std::size_t dim) {
  PointsBlock block;
  try {
    block = parse_points_block(parse_json(json_text), dim);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("points: ") + e.what());
  }
  std::vector<std::vector<double>> out = block.list;
  if (block.range) {
    for (auto& p : lattice(dim, (*block.range)[0], (*block.range)[1], block.count)) {
      out.push_back(std::move(p));
    }
  }
  if (out.empty()) throw SchemaError("points: no sample points");
  return out;
}

std::vector<std::vector<double>> load_points_document(const std::filesystem::path& path,
                                                      std::size_t dim) {
  return parse_points_document(read_file(path), dim);
}

std::vector<sym::Expr> parse_map_document(std::string_view json_text, const sym::Chart& source) {
  const json doc = parse_json(json_text);
  const json& m = doc.is_array() ? doc : require(doc, "map", "map file");
  sym::Bindings b;
  if (doc.is_object()) b = parse_parameters(doc);
  const auto out = expr_row(m, source, b, "map");
  if (out.size() != source.dimension()) {
    throw SchemaError("map: expected " + std::to_string(source.dimension()) + " components");
  }
  return out;
}

std::vector<sym::Expr> load_map_document(const std::filesystem::path& path, const sym::Chart& source) {
  return parse_map_document(read_file(path), source);
}

}  // namespace srcartan
