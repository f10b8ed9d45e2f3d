#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subfp/quadrature.hpp"
#include "subfp/util.hpp"

namespace subfp {

enum class DensityFamily { gaussian, generalized_gaussian, tabulated };

// Normalization constant of the power-law density c*(1+x^2)^(-beta),
// c = Gamma(beta) / (sqrt(pi) * Gamma(beta - 1/2)), finite for beta > 1/2.
inline double power_law_normalization(double beta) {
  if (!(beta > 0.5))
    throw ConfigError("power-law density requires beta > 1/2, got " +
                      format_g(beta));
  return std::exp(std::lgamma(beta) - std::lgamma(beta - 0.5)) /
         std::sqrt(M_PI);
}

// Half-line mass ratio (integral of (1+x^2)^(-beta) over [0, inf)),
// equal to 1/(2c); shows up as the diffusion bound constant.
inline double power_law_half_mass(double beta) {
  return 0.5 / power_law_normalization(beta);
}

// A unit-mass probability density with median 0.  The two analytic families
// carry closed-form log-derivatives; tabulated input only supports what a
// table can: evaluation by interpolation and cumulative integrals.
class DensityModel {
public:
  static DensityModel gaussian() { return DensityModel(DensityFamily::gaussian, 0.0); }

  static DensityModel generalized_gaussian(double beta) {
    DensityModel d(DensityFamily::generalized_gaussian, beta);
    d.norm_ = power_law_normalization(beta);  // validates beta
    return d;
  }

  // Table of (x, value) samples, strictly increasing in x, positive values,
  // spanning 0, with trapezoidal mass within 1e-10 of one.  Normalization is
  // the caller's job; the constructor only verifies it.
  static DensityModel tabulated(std::vector<double> xs, std::vector<double> values) {
    DensityModel d(DensityFamily::tabulated, 0.0);
    d.xs_ = std::move(xs);
    d.vals_ = std::move(values);
    d.validate_table();
    d.build_cumulative();
    return d;
  }

  // Two-column whitespace-separated text file; '#' starts a comment line.
  static DensityModel tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open density table: " + path);
    std::vector<double> xs, vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      double x, v;
      if (!(ls >> x)) continue;  // blank / comment-only line
      if (!(ls >> v))
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": expected two columns");
      xs.push_back(x);
      vals.push_back(v);
    }
    if (xs.size() < 2)
      throw ConfigError(path + ": density table needs at least two rows");
    return tabulated(std::move(xs), std::move(vals));
  }

  DensityFamily family() const { return family_; }

  // Analytic families expose derivative information; a table does not.
  bool smooth() const { return family_ != DensityFamily::tabulated; }

  double beta() const {
    if (family_ != DensityFamily::generalized_gaussian)
      throw ConfigError("beta is only defined for the generalized Gaussian family");
    return beta_;
  }

  double eval(double x) const {
    switch (family_) {
      case DensityFamily::gaussian:
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
      case DensityFamily::generalized_gaussian:
        return norm_ * std::pow(1.0 + x * x, -beta_);
      case DensityFamily::tabulated:
        return interpolate(x);
    }
    return 0.0;
  }

  // d/dx log e(x); analytic families only.
  double log_deriv(double x) const {
    switch (family_) {
      case DensityFamily::gaussian:
        return -x;
      case DensityFamily::generalized_gaussian:
        return -2.0 * beta_ * x / (1.0 + x * x);
      case DensityFamily::tabulated:
        throw NumericalError("log_deriv is not available for tabulated densities");
    }
    return 0.0;
  }

  // Cumulative distribution.  The generalized Gaussian has no elementary
  // antiderivative for general beta; integrate the (finite) stretch from the
  // median instead of the tail.
  double cdf(double x) const {
    switch (family_) {
      case DensityFamily::gaussian:
        return 0.5 * std::erfc(-x / std::sqrt(2.0));
      case DensityFamily::generalized_gaussian: {
        if (x == 0.0) return 0.5;
        const double ax = std::abs(x);
        long budget = 20000;
        const double half = quad_detail::adaptive_gl10(
            [this](double y) { return eval(y); }, 0.0, ax, 1e-13, 0, budget);
        return x > 0 ? 0.5 + half : 0.5 - half;
      }
      case DensityFamily::tabulated:
        return cumulative(x);
    }
    return 0.0;
  }

  // Tabulated-only accessors used by the diffusion construction.
  const std::vector<double>& table_xs() const { return require_table(), xs_; }
  const std::vector<double>& table_values() const { return require_table(), vals_; }
  double table_mass() const { return require_table(), cum_.back(); }
  double xmin() const { return require_table(), xs_.front(); }
  double xmax() const { return require_table(), xs_.back(); }

  // Partial trapezoidal integral from xmin to x (tabulated only).
  double cumulative(double x) const {
    require_table();
    const std::size_t k = locate(x);
    const double e0 = vals_[k];
    const double e1 = interpolate(x);
    return cum_[k] + 0.5 * (x - xs_[k]) * (e0 + e1);
  }

private:
  DensityModel(DensityFamily fam, double beta) : family_(fam), beta_(beta) {}

  void require_table() const {
    if (family_ != DensityFamily::tabulated)
      throw NumericalError("table access on an analytic density");
  }

  std::size_t locate(double x) const {
    if (!(x >= xs_.front() && x <= xs_.back()))
      throw NumericalError("tabulated density evaluated at x = " + format_g17(x) +
                           " outside [" + format_g(xs_.front()) + ", " +
                           format_g(xs_.back()) + "]");
    // Tables are small and evaluation patterns are local; linear scan with a
    // cached hint would be overkill next to binary search.
    std::size_t lo = 0, hi = xs_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (xs_[mid] <= x) lo = mid; else hi = mid;
    }
    return lo;
  }

  double interpolate(double x) const {
    const std::size_t k = locate(x);
    const double t = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
    // Piecewise linear: positivity- and monotonicity-preserving by construction.
    return (1.0 - t) * vals_[k] + t * vals_[k + 1];
  }

  void validate_table() {
    if (xs_.size() != vals_.size() || xs_.size() < 2)
      throw ConfigError("density table: need matching x/value columns, >= 2 rows");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
      if (!(xs_[i] < xs_[i + 1]))
        throw ConfigError("density table: x values must be strictly increasing");
    for (double v : vals_)
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("density table: values must be positive and finite");
    if (!(xs_.front() < 0.0 && xs_.back() > 0.0))
      throw ConfigError("density table: range must contain the median 0");
  }

  void build_cumulative() {
    cum_.assign(xs_.size(), 0.0);
    NeumaierSum acc;
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      acc.add(0.5 * (xs_[i] - xs_[i - 1]) * (vals_[i] + vals_[i - 1]));
      cum_[i] = acc.value();
    }
    if (std::abs(cum_.back() - 1.0) > 1e-10)
      throw ConfigError("density table: trapezoidal mass " + format_g17(cum_.back()) +
                        " deviates from 1 by more than 1e-10");
  }

  DensityFamily family_;
  double beta_ = 0.0;
  double norm_ = 0.0;
  std::vector<double> xs_, vals_, cum_;
};

}  // namespace subfp
