#pragma once

#include <algorithm>
#include <cmath>

namespace metricforge {

// Uniform floating-point comparison policy: relative slack with an absolute
// floor. An inequality a <= b is accepted when a <= b + margin(scale), where
// scale is the larger magnitude of the two sides unless stated otherwise.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  double margin(double scale) const {
    return std::max(abs, rel * std::fabs(scale));
  }

  bool leq(double a, double b) const {
    return a <= b + margin(std::max(std::fabs(a), std::fabs(b)));
  }

  bool geq(double a, double b) const { return leq(b, a); }

  bool close(double a, double b) const {
    return std::fabs(a - b) <= margin(std::max(std::fabs(a), std::fabs(b)));
  }
};

}  // namespace metricforge
