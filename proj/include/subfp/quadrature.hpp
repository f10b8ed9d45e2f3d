#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "subfp/util.hpp"

namespace subfp {

// Composite rules on finite intervals.  The Newton-Cotes variants are the
// *open* ones (no endpoint evaluations), so integrands may be singular or
// merely undefined at panel edges.  gauss_legendre_10 is the workhorse for
// coefficient construction.
enum class QuadratureRule {
  newton_cotes_2,    // 1 interior node (midpoint), exact through degree 1
  newton_cotes_4,    // 3 interior nodes, exact through degree 3
  newton_cotes_6,    // 5 interior nodes, exact through degree 5
  gauss_legendre_10  // 10 Gauss nodes, exact through degree 19
};

namespace quad_detail {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
    0.8650633666889845, 0.9739065285171717};
inline constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

// Open Newton-Cotes on [0, 1]: m interior nodes at i/(m+1), i = 1..m.
// Weights sum to 1; the 3- and 5-node variants have negative weights,
// which is normal for open rules.
inline constexpr std::array<double, 3> kNc4Weights = {2.0 / 3.0, -1.0 / 3.0,
                                                      2.0 / 3.0};
inline constexpr std::array<double, 5> kNc6Weights = {
    11.0 / 20.0, -14.0 / 20.0, 26.0 / 20.0, -14.0 / 20.0, 11.0 / 20.0};

[[noreturn]] inline void throw_nonfinite(double x) {
  throw NumericalError("quadrature: non-finite integrand value at node x = " +
                       format_g17(x));
}

template <class F>
double eval_checked(F&& f, double x) {
  double v = f(x);
  if (!std::isfinite(v)) throw_nonfinite(x);
  return v;
}

// Single panel [a, b].
template <class F>
double apply_rule(F&& f, double a, double b, QuadratureRule rule) {
  const double h = b - a;
  switch (rule) {
    case QuadratureRule::newton_cotes_2:
      return h * eval_checked(f, a + 0.5 * h);
    case QuadratureRule::newton_cotes_4: {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        s += kNc4Weights[std::size_t(i)] * eval_checked(f, a + h * (i + 1) / 4.0);
      return h * s;
    }
    case QuadratureRule::newton_cotes_6: {
      double s = 0.0;
      for (int i = 0; i < 5; ++i)
        s += kNc6Weights[std::size_t(i)] * eval_checked(f, a + h * (i + 1) / 6.0);
      return h * s;
    }
    case QuadratureRule::gauss_legendre_10: {
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * h;
      double s = 0.0;
      for (int i = 0; i < 5; ++i) {
        const double dx = half * kGlNodes[std::size_t(i)];
        s += kGlWeights[std::size_t(i)] *
             (eval_checked(f, mid - dx) + eval_checked(f, mid + dx));
      }
      return half * s;
    }
  }
  throw NumericalError("quadrature: unknown rule");
}

// Adaptive bisection driven by a whole-vs-halves GL10 comparison.  Needed on
// semi-infinite ranges where tanh(./eps) boundary layers are far narrower
// than the geometric panels.
template <class F>
double adaptive_gl10(F&& f, double a, double b, double tol, int depth,
                     long& budget) {
  const double whole = apply_rule(f, a, b, QuadratureRule::gauss_legendre_10);
  const double mid = 0.5 * (a + b);
  const double left = apply_rule(f, a, mid, QuadratureRule::gauss_legendre_10);
  const double right = apply_rule(f, mid, b, QuadratureRule::gauss_legendre_10);
  const double refined = left + right;
  if (std::abs(refined - whole) <=
      tol * (std::abs(refined) + std::numeric_limits<double>::min()))
    return refined;
  if (depth >= 48 || --budget <= 0)
    throw NumericalError(
        "quadrature: adaptive refinement exhausted on [" + format_g17(a) +
        ", " + format_g17(b) + "], last estimate " + format_g17(refined));
  return adaptive_gl10(f, a, mid, tol, depth + 1, budget) +
         adaptive_gl10(f, mid, b, tol, depth + 1, budget);
}

}  // namespace quad_detail

constexpr int rule_node_count(QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::newton_cotes_2: return 1;
    case QuadratureRule::newton_cotes_4: return 3;
    case QuadratureRule::newton_cotes_6: return 5;
    case QuadratureRule::gauss_legendre_10: return 10;
  }
  return 0;
}

constexpr int rule_polynomial_degree(QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::newton_cotes_2: return 1;
    case QuadratureRule::newton_cotes_4: return 3;
    case QuadratureRule::newton_cotes_6: return 5;
    case QuadratureRule::gauss_legendre_10: return 19;
  }
  return -1;
}

// Composite integration of f over [a, b] with `panels` equal panels.
template <class F>
double integrate_finite(F&& f, double a, double b, QuadratureRule rule,
                        int panels = 1) {
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw NumericalError("integrate_finite: non-finite interval");
  if (panels < 1)
    throw NumericalError("integrate_finite: panels must be >= 1");
  if (a == b) return 0.0;
  const double h = (b - a) / panels;
  NeumaierSum acc;
  for (int k = 0; k < panels; ++k)
    acc.add(quad_detail::apply_rule(f, a + k * h, a + (k + 1) * h, rule));
  return acc.value();
}

// Integration of f over [a, inf) for absolutely integrable integrands with
// eventually monotone decay.  Geometric panels of doubling width, each
// resolved adaptively; stops once a panel contributes less than tol times
// the accumulated absolute value.
template <class F>
double integrate_semi_infinite(F&& f, double a, double tol = 1e-12) {
  if (!std::isfinite(a))
    throw NumericalError("integrate_semi_infinite: non-finite left endpoint");
  if (!(tol > 0))
    throw NumericalError("integrate_semi_infinite: tol must be positive");
  constexpr int kMaxPanels = 256;
  double lo = a;
  double width = 1.0;
  NeumaierSum acc;
  double acc_abs = 0.0;
  double last = 0.0;
  for (int k = 0; k < kMaxPanels; ++k) {
    long budget = 20000;
    last = quad_detail::adaptive_gl10(f, lo, lo + width, tol, 0, budget);
    acc.add(last);
    acc_abs += std::abs(last);
    if (k >= 1 && std::abs(last) <= tol * acc_abs) return acc.value();
    lo += width;
    width *= 2.0;
  }
  throw NumericalError(
      "integrate_semi_infinite: no convergence within 256 panels "
      "(accumulated " +
      format_g17(acc.value()) + ", last increment " + format_g17(last) + ")");
}

}  // namespace subfp
