#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spmex {

/** Piecewise-linear sampled curve.
 *
 *  Abscissae must be finite and strictly increasing.  Evaluation outside the
 *  sampled range clamps to the end value (flat extrapolation), so the slope
 *  is zero there.
 */
class Curve {
public:
  Curve() = default;

  Curve(std::vector<double> x, std::vector<double> y, std::string name = "curve")
      : x_(std::move(x)), y_(std::move(y)), name_(std::move(name)) {
    if (x_.size() != y_.size())
      throw std::invalid_argument(name_ + ": abscissa/ordinate size mismatch");
    if (x_.size() < 2)
      throw std::invalid_argument(name_ + ": needs at least 2 sample points");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
        throw std::invalid_argument(name_ + ": non-finite sample at index " + std::to_string(i));
      if (i > 0 && !(x_[i] > x_[i - 1]))
        throw std::invalid_argument(name_ + ": abscissae not strictly increasing at index " +
                                    std::to_string(i));
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
    return y_[i - 1] + t * (y_[i] - y_[i - 1]);
  }

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& ordinates() const { return y_; }
  const std::string& name() const { return name_; }

  bool strictly_decreasing() const {
    for (std::size_t i = 1; i < y_.size(); ++i)
      if (!(y_[i] < y_[i - 1])) return false;
    return true;
  }

private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::string name_;
};

} // namespace spmex
