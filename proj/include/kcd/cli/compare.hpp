#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kcd::cli {

class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quantities compared per run: F, gamma, W, xi, delta_E, gap_min.
struct CompareOptions {
  double default_tolerance = 1e-9;
  std::map<std::string, double> tolerances;  // per quantity

  double tolerance(const std::string& quantity) const;
};

struct QuantityDiff {
  std::string run;       // "cd tau=1 delta=0.001"
  std::string quantity;
  double a = 0, b = 0;
  double diff = 0;       // a - b
  bool pass = true;
};

struct CompareReport {
  std::vector<QuantityDiff> diffs;
  bool all_pass() const;
  std::string to_text() const;
};

/// Matches runs by position; the two summaries must list the same
/// (protocol, tau, delta) triples or, when `cross_protocol` is set, the same
/// (tau, delta) pairs with any protocols. Failed runs are a shape mismatch.
CompareReport compare(const nlohmann::json& a, const nlohmann::json& b, const CompareOptions& opts = {},
                      bool cross_protocol = false);

nlohmann::json load_summary(const std::filesystem::path& path);

}  // namespace kcd::cli
