#pragma once

// Small sub-Riemannian structures built in code.

#include <string>
#include <vector>

#include "srcartan/forms.hpp"
#include "srcartan/reduction.hpp"

namespace testing_support {

using srcartan::DeclaredCoframe;
using srcartan::FrameMetric;
using srcartan::SubRiemannianSpec;
namespace sym = srcartan::sym;

inline std::vector<sym::Expr> parse_all(const std::vector<std::string>& src, const sym::Chart& chart,
                                        const sym::Bindings& b = {}) {
  std::vector<sym::Expr> out;
  for (const auto& s : src) out.push_back(sym::parse(s, chart, b));
  return out;
}

inline SubRiemannianSpec frame_spec(const std::vector<std::string>& names, const std::string& eta,
                                    const std::vector<std::vector<std::string>>& frame,
                                    const std::vector<std::vector<std::string>>& gram,
                                    const sym::Bindings& b = {}) {
  SubRiemannianSpec spec;
  spec.chart = sym::Chart(names);
  spec.eta = sym::parse_one_form(eta, spec.chart, b);
  FrameMetric fm;
  for (const auto& v : frame) fm.frame.push_back(parse_all(v, spec.chart, b));
  for (const auto& r : gram) fm.gram.push_back(parse_all(r, spec.chart, b));
  spec.metric = fm;
  return spec;
}

inline SubRiemannianSpec coframe_spec(const std::vector<std::string>& names, const std::string& eta,
                                      const std::vector<std::string>& forms,
                                      const sym::Bindings& b = {}) {
  SubRiemannianSpec spec;
  spec.chart = sym::Chart(names);
  spec.eta = sym::parse_one_form(eta, spec.chart, b);
  DeclaredCoframe dc;
  for (const auto& f : forms) dc.forms.push_back(sym::parse_one_form(f, spec.chart, b));
  spec.metric = dc;
  return spec;
}

/// Heisenberg group: D = ker(dz + x dy), frame d/dx, d/dy - x d/dz, gram k * I.
inline SubRiemannianSpec heisenberg(const std::string& k = "1") {
  return frame_spec({"x", "y", "z"}, "dz + x*dy", {{"1", "0", "0"}, {"0", "1", "-x"}},
                    {{k, "0"}, {"0", k}});
}

/// R^5 with eta = dz + x1 dy1 + x2 dy2 and gram diag(p, q, r, s).
inline SubRiemannianSpec r5(const std::string& p, const std::string& q, const std::string& r,
                            const std::string& s) {
  return frame_spec({"x1", "y1", "x2", "y2", "z"}, "dz + x1*dy1 + x2*dy2",
                    {{"1", "0", "0", "0", "0"},
                     {"0", "1", "0", "0", "-x1"},
                     {"0", "0", "1", "0", "0"},
                     {"0", "0", "0", "1", "-x2"}},
                    {{p, "0", "0", "0"}, {"0", q, "0", "0"}, {"0", "0", r, "0"}, {"0", "0", "0", s}});
}

/// dx^2 + (1 + x^2) dy^2 on ker(dz + x dy).
inline SubRiemannianSpec nonflat() {
  return frame_spec({"x", "y", "z"}, "dz + x*dy", {{"1", "0", "0"}, {"0", "1", "-x"}},
                    {{"1", "0"}, {"0", "1 + x^2"}});
}

inline std::vector<std::vector<double>> lattice(std::size_t dim, double lo, double hi, int count) {
  std::vector<std::vector<double>> out{{}};
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<std::vector<double>> next;
    for (const auto& p : out) {
      for (int i = 0; i < count; ++i) {
        auto q = p;
        q.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace testing_support
