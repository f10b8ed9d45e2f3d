#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "subfp/grid.hpp"
#include "subfp/model.hpp"
#include "subfp/scheme.hpp"
#include "subfp/util.hpp"

namespace subfp {

namespace diag_detail {

// Negative entries beyond -1e-12 are treated as corrupt data; anything in
// [-1e-12, 0] is rounding debris from an explicit step and clamps to zero.
inline double clamp_nonneg(double x, const char* who) {
  if (x < -1e-12)
    throw NumericalError(std::string(who) + ": negative value " + format_g17(x));
  return x > 0.0 ? x : 0.0;
}

// Logarithmic mean of two positive numbers, (b - a)/log(b/a), continuous
// across a == b.  Evaluated via log1p of the relative gap.
inline double log_mean(double a, double b) {
  const double d = (b - a) / a;
  if (std::abs(d) < 1e-8) return a * (1.0 + 0.5 * d);
  return a * d / std::log1p(d);
}

}  // namespace diag_detail

// H(f | e) = dx * sum f_i log(f_i / e_i); 0 log 0 counts as 0.
inline double discrete_entropy(const std::vector<double>& f,
                               const std::vector<double>& e, double dx) {
  if (f.size() != e.size())
    throw NumericalError("discrete_entropy: size mismatch");
  NeumaierSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fi = diag_detail::clamp_nonneg(f[i], "discrete_entropy");
    if (fi > 0.0) acc.add(fi * std::log(fi / e[i]));
  }
  return dx * acc.value();
}

// Discrete entropy production
//   I = (1/dx) * sum_interfaces kappa_{i+1/2} ehat_i (u_{i+1} - u_i)(log u_{i+1} - log u_i),
// u = f/e, ehat the logarithmic mean of adjacent e samples.  Nonnegative by
// construction; equals -dH/dt along the semi-discrete flow.  A zero f next
// to a nonzero neighbor would put -inf into the log; such u are floored at
// 1e-300 and the excursion is reported through `floored`.
inline double discrete_dissipation(const std::vector<double>& f,
                                   const std::vector<double>& e,
                                   const SchemeWeights& w,
                                   bool* floored = nullptr) {
  const std::size_t n = f.size();
  if (e.size() != n || w.kappa_half.size() + 1 != n)
    throw NumericalError("discrete_dissipation: size mismatch");
  if (floored) *floored = false;
  NeumaierSum acc;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double u0 = diag_detail::clamp_nonneg(f[i], "discrete_dissipation") / e[i];
    double u1 = diag_detail::clamp_nonneg(f[i + 1], "discrete_dissipation") / e[i + 1];
    if (u0 <= 0.0 || u1 <= 0.0) {
      if (u0 <= 0.0 && u1 <= 0.0) continue;  // no transport, no production
      if (floored) *floored = true;
      u0 = std::max(u0, 1e-300);
      u1 = std::max(u1, 1e-300);
    }
    const double ehat = diag_detail::log_mean(e[i], e[i + 1]);
    acc.add(w.kappa_half[i] * ehat * (u1 - u0) * (std::log(u1) - std::log(u0)));
  }
  return acc.value() / w.grid.dx;
}

// Hellinger distance sqrt( dx * sum (sqrt f - sqrt e)^2 ).
inline double hellinger_distance(const std::vector<double>& f,
                                 const std::vector<double>& e, double dx) {
  if (f.size() != e.size())
    throw NumericalError("hellinger_distance: size mismatch");
  NeumaierSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::sqrt(diag_detail::clamp_nonneg(f[i], "hellinger_distance")) -
                     std::sqrt(e[i]);
    acc.add(d * d);
  }
  return std::sqrt(dx * acc.value());
}

// Pointwise relative l1 deviation sum |f_i - e_i| / e_i.  Deliberately not
// dx-weighted (matches the reference diagnostic this solver reproduces);
// see l1_distance for the integral-scaled variant.
inline double relative_l1_error(const std::vector<double>& f,
                                const std::vector<double>& e) {
  if (f.size() != e.size())
    throw NumericalError("relative_l1_error: size mismatch");
  NeumaierSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::abs(f[i] - e[i]) / e[i]);
  return acc.value();
}

// dx * sum |f_i - e_i|, the discrete L1 distance.
inline double l1_distance(const std::vector<double>& f,
                          const std::vector<double>& e, double dx) {
  if (f.size() != e.size()) throw NumericalError("l1_distance: size mismatch");
  NeumaierSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::abs(f[i] - e[i]));
  return dx * acc.value();
}

// d_p(f | e) = dx * sum ((f/e)^p - 1)^2 e for p in [1/2, 1]; p = 1/2 is the
// squared Hellinger distance, p = 1 the chi-square divergence.
inline double d_p_functional(const std::vector<double>& f,
                             const std::vector<double>& e, double dx, double p) {
  if (f.size() != e.size()) throw NumericalError("d_p_functional: size mismatch");
  if (!(p >= 0.5 && p <= 1.0))
    throw ConfigError("d_p_functional: p must lie in [1/2, 1], got " + format_g(p));
  NeumaierSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double u = diag_detail::clamp_nonneg(f[i], "d_p_functional") / e[i];
    const double d = std::pow(u, p) - 1.0;
    acc.add(d * d * e[i]);
  }
  return dx * acc.value();
}

// Weighted moment functional for power-law equilibria:
//   M_{p,beta}(f) = (1/c_beta) * dx * sum (1 + x^2)^{beta (2p-1)} f^{2p},
// with c_beta the power-law normalization constant.  Requires p in (1/2, 1].
inline double moment_functional(const Field& f, double p, double beta) {
  if (!(p > 0.5 && p <= 1.0))
    throw ConfigError("moment_functional: p must lie in (1/2, 1], got " + format_g(p));
  const double c = power_law_normalization(beta);  // validates beta
  const double expo = beta * (2.0 * p - 1.0);
  NeumaierSum acc;
  for (int i = 0; i < f.size(); ++i) {
    const double x = f.grid.node(i);
    const double fi = diag_detail::clamp_nonneg(f[i], "moment_functional");
    acc.add(std::pow(1.0 + x * x, expo) * std::pow(fi, 2.0 * p));
  }
  return f.grid.dx * acc.value() / c;
}

struct WirtingerResult {
  double lhs;  // E |phi - E phi|^p
  double rhs;  // (2p)^p E [ kappa^p |phi'|^p ]
};

// Weighted Wirtinger-type inequality: for the Heaviside-drift diffusion
// coefficient kappa of the model's density,
//   E |phi - E phi|^p <= (2p)^p E [ kappa^p |phi'|^p ],   p >= 1.
// Expectations are taken against the model density over the whole line.
template <class Phi, class DPhi>
WirtingerResult wirtinger_check(const FPModel& model, Phi&& phi, DPhi&& dphi,
                                double p, double tol = 1e-9) {
  if (!(p >= 1.0)) throw ConfigError("wirtinger_check: p must be >= 1");
  const auto& e = model.density();
  auto expect = [&](auto&& h) {
    return integrate_semi_infinite(
        [&](double x) { return (h(x) + h(-x)) * e.eval(x); }, 0.0, tol);
  };
  const double mean = expect(phi);
  const double lhs = expect([&](double x) { return std::pow(std::abs(phi(x) - mean), p); });
  const double rhs = std::pow(2.0 * p, p) *
                     expect([&](double x) {
                       return std::pow(model.kappa(x), p) *
                              std::pow(std::abs(dphi(x)), p);
                     });
  return {lhs, rhs};
}

// Least-squares slope of log v against log t over the window [tmin, tmax].
// Requires at least five points with t > 0 and v > 0 inside the window and a
// nondegenerate spread of abscissae.
inline double fit_decay_rate(const std::vector<double>& ts,
                             const std::vector<double>& vs, double tmin,
                             double tmax) {
  if (ts.size() != vs.size()) throw NumericalError("fit_decay_rate: size mismatch");
  std::vector<double> lt, lv;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < tmin || ts[i] > tmax) continue;
    if (!(ts[i] > 0.0) || !(vs[i] > 0.0))
      throw NumericalError("fit_decay_rate: window contains nonpositive data");
    lt.push_back(std::log(ts[i]));
    lv.push_back(std::log(vs[i]));
  }
  if (lt.size() < 5)
    throw NumericalError("fit_decay_rate: fewer than 5 usable points in window");
  double st = 0, sv = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) { st += lt[i]; sv += lv[i]; }
  const double mt = st / lt.size(), mv = sv / lv.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    num += (lt[i] - mt) * (lv[i] - mv);
    den += (lt[i] - mt) * (lt[i] - mt);
  }
  if (!(den > 0.0))
    throw NumericalError("fit_decay_rate: degenerate window (all t equal)");
  return num / den;
}

// One row of the time-series output.
struct DiagnosticRecord {
  double t = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;
  double hellinger = 0.0;
  double rel_l1 = 0.0;
  double d_p = 0.0;
  std::optional<double> moment;  // power-law runs only
  bool log_floored = false;      // dissipation hit the 1e-300 log floor
};

}  // namespace subfp
