#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace subfp {

// Error raised when a numerical procedure cannot deliver a trustworthy result
// (quadrature not converging, NaN in a time step, singular solve, ...).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Error raised for invalid user-facing configuration (CLI / config file / run setup).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Compensated (Neumaier) accumulator.  Diagnostics sum many near-cancelling
// terms; plain left-to-right summation costs ~N*eps which is visible next to
// the 1e-13..1e-15 tolerances used throughout.
class NeumaierSum {
public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double neumaier_sum(const std::vector<double>& v) {
  NeumaierSum acc;
  for (double x : v) acc.add(x);
  return acc.value();
}

// printf-style %.17g formatting, enough digits for exact double round-trip.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace subfp
