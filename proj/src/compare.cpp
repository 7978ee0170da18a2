#include "kcd/cli/compare.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kcd::cli {

using json = nlohmann::json;

namespace {

const char* const kQuantities[] = {"F", "gamma", "W", "xi", "delta_E", "gap_min"};

std::optional<double> quantity(const json& run, const std::string& q) {
  const json* v = nullptr;
  if (q == "gap_min") {
    v = &run.at("gap_min");
  } else if (q == "xi") {
    const json& s = run.at("final").at("support");
    if (s.is_null()) return std::nullopt;
    v = &s.at("xi");
  } else {
    v = &run.at("final").at(q);
  }
  if (v->is_null()) return std::nullopt;
  return v->get<double>();
}

std::string label(const json& run) {
  std::ostringstream s;
  s << run.at("protocol").get<std::string>() << " tau=" << run.at("tau").get<double>()
    << " delta=" << run.at("delta").get<double>();
  return s.str();
}

}  // namespace

double CompareOptions::tolerance(const std::string& q) const {
  auto it = tolerances.find(q);
  return it == tolerances.end() ? default_tolerance : it->second;
}

bool CompareReport::all_pass() const {
  return std::all_of(diffs.begin(), diffs.end(), [](const QuantityDiff& d) { return d.pass; });
}

std::string CompareReport::to_text() const {
  std::string out;
  char buf[256];
  for (const auto& d : diffs) {
    std::snprintf(buf, sizeof buf, "%-4s %-28s %-8s a=% .10e b=% .10e diff=% .3e\n", d.pass ? "ok" : "FAIL",
                  d.run.c_str(), d.quantity.c_str(), d.a, d.b, d.diff);
    out += buf;
  }
  return out;
}

CompareReport compare(const json& a, const json& b, const CompareOptions& opts, bool cross_protocol) {
  try {
    const json& ra = a.at("runs");
    const json& rb = b.at("runs");
    if (ra.size() != rb.size())
      throw ShapeMismatch("summaries list " + std::to_string(ra.size()) + " and " + std::to_string(rb.size()) + " runs");
    CompareReport report;
    for (std::size_t k = 0; k < ra.size(); ++k) {
      const json& x = ra[k];
      const json& y = rb[k];
      const bool same = x.at("tau") == y.at("tau") && x.at("delta") == y.at("delta") &&
                        (cross_protocol || x.at("protocol") == y.at("protocol"));
      if (!same) throw ShapeMismatch("run " + std::to_string(k) + " differs: " + label(x) + " vs " + label(y));
      if (x.at("status") != "ok" || y.at("status") != "ok")
        throw ShapeMismatch("run " + std::to_string(k) + " (" + label(x) + ") did not complete in both summaries");
      const std::string name = cross_protocol ? label(x) + " vs " + y.at("protocol").get<std::string>() : label(x);
      for (const char* q : kQuantities) {
        const auto va = quantity(x, q);
        const auto vb = quantity(y, q);
        if (va.has_value() != vb.has_value())
          throw ShapeMismatch(std::string("quantity ") + q + " present in only one summary for " + label(x));
        if (!va) continue;
        QuantityDiff d{name, q, *va, *vb, *va - *vb, true};
        d.pass = std::abs(d.diff) <= opts.tolerance(q);
        report.diffs.push_back(d);
      }
    }
    return report;
  } catch (const json::exception& e) {
    throw ShapeMismatch(std::string("malformed summary: ") + e.what());
  }
}

json load_summary(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ShapeMismatch(path.string() + ": " + e.what());
  }
}

}  // namespace kcd::cli
