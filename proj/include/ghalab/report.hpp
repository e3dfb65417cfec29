#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace ghalab {

struct CheckResult {
  std::string suite;
  std::string check;
  double max_residual = 0.0;
  double tolerance = 0.0;
  // NaN residuals never pass
  bool pass() const { return max_residual <= tolerance; }
};

using ResidualReport = std::vector<CheckResult>;

inline bool all_pass(const ResidualReport& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckResult& c) { return c.pass(); });
}

inline void append(ResidualReport& dst, const ResidualReport& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace ghalab
