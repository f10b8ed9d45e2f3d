#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "subfp/density.hpp"
#include "subfp/quadrature.hpp"
#include "subfp/util.hpp"

namespace subfp {

// Smoothed confinement drift tanh(x/eps).
inline double drift_theta(double x, double eps) {
  if (!(eps > 0.0))
    throw ConfigError("drift_theta: eps must be positive, got " + format_g(eps));
  return std::tanh(x / eps);
}

struct SandwichConstants {
  double c_hat;  // min kappa_eps / kappa over the sample set
  double C_hat;  // max kappa_eps / kappa over the sample set
};

// Drift-diffusion model whose steady state is a prescribed density e:
// the diffusion coefficient is built from e so that the flux
// (kappa_eps e)' + theta_eps e vanishes identically.
//
// kappa (Heaviside drift, i.e. sign(x)) is the tail-mass ratio
//   kappa(x) = \int_x^inf e / e(x)      for x >= 0, mirrored for x < 0.
// kappa_eps replaces the tail mass by \int_x^inf |tanh(y/eps)| e(y) dy.
// For the analytic families both are computed through the substitution
// y(z) that maps [0, inf) onto [x, inf); the density value at x cancels,
// so the integrands stay O(1) even deep in the tails.
class FPModel {
public:
  FPModel(DensityModel density, double eps, double quad_tol = 1e-12)
      : density_(std::move(density)), eps_(eps), tol_(quad_tol) {
    if (!(eps_ > 0.0))
      throw ConfigError("FPModel: eps must be positive, got " + format_g(eps_));
    if (!(tol_ > 0.0))
      throw ConfigError("FPModel: quadrature tolerance must be positive");
    if (density_.family() == DensityFamily::tabulated) build_drift_table();
    m_eps_ = compute_m_eps();
  }

  const DensityModel& density() const { return density_; }
  double eps() const { return eps_; }
  double quad_tol() const { return tol_; }

  double drift(double x) const { return std::tanh(x / eps_); }

  // Mass of |drift| against e; strictly below 1, approaching 1 as eps -> 0.
  double m_eps() const { return m_eps_; }

  double kappa(double x) const {
    const double ax = std::abs(x);
    switch (density_.family()) {
      case DensityFamily::gaussian:
        return integrate_semi_infinite(
            [ax](double z) {
              return z / std::sqrt(z * z + ax * ax) * std::exp(-0.5 * z * z);
            },
            0.0, tol_);
      case DensityFamily::generalized_gaussian: {
        const double b = density_.beta();
        const double s = 1.0 + ax * ax;
        return integrate_semi_infinite(
            [ax, b, s](double z) {
              const double y = std::sqrt(z * z * s + ax * ax);
              return z * s / y * std::pow(1.0 + z * z, -b);
            },
            0.0, tol_);
      }
      case DensityFamily::tabulated: {
        const double e = density_.eval(x);
        const double F = density_.cumulative(x);
        return (x < 0.0 ? F : density_.table_mass() - F) / e;
      }
    }
    return 0.0;
  }

  double kappa_eps(double x) const {
    const double ax = std::abs(x);
    // Analytic families are even in x; tables need not be.
    const double key = density_.smooth() ? ax : x;
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    double v = 0.0;
    switch (density_.family()) {
      case DensityFamily::gaussian:
        v = integrate_semi_infinite(
            [ax, this](double z) {
              const double y = std::sqrt(z * z + ax * ax);
              const double t = y > 0.0 ? std::tanh(y / eps_) : 0.0;
              return t * z / y * std::exp(-0.5 * z * z);
            },
            0.0, tol_);
        break;
      case DensityFamily::generalized_gaussian: {
        const double b = density_.beta();
        const double s = 1.0 + ax * ax;
        v = integrate_semi_infinite(
            [ax, b, s, this](double z) {
              const double y = std::sqrt(z * z * s + ax * ax);
              const double t = y > 0.0 ? std::tanh(y / eps_) : 0.0;
              return t * z * s / y * std::pow(1.0 + z * z, -b);
            },
            0.0, tol_);
        break;
      }
      case DensityFamily::tabulated: {
        const double e = density_.eval(x);
        const double G = drift_cumulative(x);
        v = (x < 0.0 ? G : drift_table_mass_ - G) / e;
        break;
      }
    }
    cache_.emplace(key, v);
    return v;
  }

  // Closed form for the derivative, obtained by differentiating the defining
  // zero-flux identity: kappa_eps' = -theta_eps - kappa_eps (log e)'.
  // Analytic families only.
  double kappa_eps_prime(double x) const {
    if (!density_.smooth())
      throw NumericalError("kappa_eps_prime requires an analytic density");
    return -drift(x) - kappa_eps(x) * density_.log_deriv(x);
  }

  // (theta_eps + kappa_eps') / kappa_eps, the integrand of the interface
  // exponent lambda.  The shared kappa_eps evaluation makes the quadrature
  // error cancel between numerator and denominator instead of being
  // amplified by the division.
  double flux_log_gradient(double x) const {
    if (!density_.smooth())
      throw NumericalError("flux_log_gradient requires an analytic density");
    const double k = kappa_eps(x);
    const double kp = -drift(x) - k * density_.log_deriv(x);
    return (drift(x) + kp) / k;
  }

private:
  double compute_m_eps() const {
    if (density_.family() == DensityFamily::tabulated) return drift_table_mass_;
    const double v = integrate_semi_infinite(
        [this](double y) { return drift(y) * density_.eval(y); }, 0.0, tol_);
    return 2.0 * v;
  }

  // Cumulative trapezoid of |drift| e over the table, same layout as the
  // density's own cumulative.
  void build_drift_table() {
    const auto& xs = density_.table_xs();
    const auto& vals = density_.table_values();
    drift_cum_.assign(xs.size(), 0.0);
    NeumaierSum acc;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double a = std::abs(drift(xs[i - 1])) * vals[i - 1];
      const double b = std::abs(drift(xs[i])) * vals[i];
      acc.add(0.5 * (xs[i] - xs[i - 1]) * (a + b));
      drift_cum_[i] = acc.value();
    }
    drift_table_mass_ = drift_cum_.back();
  }

  double drift_cumulative(double x) const {
    const auto& xs = density_.table_xs();
    const auto& vals = density_.table_values();
    std::size_t lo = 0, hi = xs.size() - 1;
    if (!(x >= xs.front() && x <= xs.back()))
      throw NumericalError("kappa_eps evaluated outside the density table");
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (xs[mid] <= x) lo = mid; else hi = mid;
    }
    const double a = std::abs(drift(xs[lo])) * vals[lo];
    const double t = (x - xs[lo]) / (xs[lo + 1] - xs[lo]);
    const double ex = (1.0 - t) * vals[lo] + t * vals[lo + 1];
    const double b = std::abs(drift(x)) * ex;
    return drift_cum_[lo] + 0.5 * (x - xs[lo]) * (a + b);
  }

  DensityModel density_;
  double eps_;
  double tol_;
  double m_eps_ = 0.0;
  std::vector<double> drift_cum_;
  double drift_table_mass_ = 0.0;
  // Exact-argument memo for kappa_eps; weight construction hits midpoints and
  // Gauss nodes repeatedly when several weight sets share a model.  Not
  // thread-safe: give each worker its own FPModel.
  mutable std::unordered_map<double, double> cache_;
};

// Extremes of kappa_eps/kappa over a sample set.  Sample points must avoid
// places where kappa vanishes (the edge of a tabulated range).
inline SandwichConstants sandwich_constants(const FPModel& model,
                                            const std::vector<double>& xs) {
  if (xs.empty()) throw ConfigError("sandwich_constants: empty sample set");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    const double k = model.kappa(x);
    if (!(k > 0.0))
      throw NumericalError("sandwich_constants: kappa vanishes at x = " +
                           format_g17(x));
    const double r = model.kappa_eps(x) / k;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

}  // namespace subfp
