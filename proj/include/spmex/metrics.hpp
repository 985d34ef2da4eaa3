#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spmex {

/** Root mean square percent error over the samples with t >= t_start:
 *  100 * sqrt(mean(((est - truth)/truth)^2)). */
inline double rmspe(const std::vector<double>& est, const std::vector<double>& truth,
                    const std::vector<double>& t, double t_start) {
  if (est.size() != truth.size() || est.size() != t.size())
    throw std::invalid_argument("rmspe: series lengths differ");
  double acc = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (t[i] < t_start) continue;
    if (truth[i] == 0)
      throw std::invalid_argument("rmspe: zero truth value in window at t = " +
                                  std::to_string(t[i]));
    const double rel = (est[i] - truth[i]) / truth[i];
    acc += rel * rel;
    ++n;
  }
  if (n == 0)
    throw std::invalid_argument("rmspe: no samples at or after t_start = " +
                                std::to_string(t_start));
  return 100.0 * std::sqrt(acc / static_cast<double>(n));
}

} // namespace spmex
