#pragma once

#include <cmath>
#include <vector>

#include "subfp/grid.hpp"
#include "subfp/model.hpp"
#include "subfp/quadrature.hpp"
#include "subfp/util.hpp"

namespace subfp {

// How the interface exponents lambda are obtained:
//  - quadrature: integrate (theta_eps + kappa_eps')/kappa_eps over each cell
//    with a chosen rule (one panel per cell);
//  - exact_equilibrium: lambda = log e_i - log e_{i+1} from steady-state
//    samples, which makes the discrete steady state exact.
enum class WeightMode { quadrature, exact_equilibrium };

// Interface upwinding fraction delta(lambda) = 1/lambda + 1/(1 - e^lambda),
// smooth, strictly decreasing from 1 to 0, delta(0) = 1/2.  Computed and
// returned in long double: the terminal steady-state error of the scheme is
// set by how exactly delta/lambda/C encode the equilibrium ratio, and keeping
// the whole weight pipeline in extended precision moves that plateau from
// ~5e-12 down to ~4e-14.
inline long double delta_from_lambda(long double lambda) {
  if (fabsl(lambda) < 1e-5L) {
    // Series around 0; next term is lambda^3/720, below roundoff here.
    return 0.5L - lambda / 12.0L;
  }
  if (lambda > 700.0L) return 1.0L / lambda;          // e^lambda overflows
  if (lambda < -700.0L) return 1.0L + 1.0L / lambda;  // e^lambda underflows
  // 1/(1 - e^lambda) = -1/expm1(lambda), keeping the cancellation between
  // the two O(1/lambda) halves under control for small-ish lambda.
  return 1.0L / lambda - 1.0L / expm1l(lambda);
}

// delta evaluated directly from a pair of steady-state samples.  Equivalent
// to delta_from_lambda(log(e_i/e_ip1)); the ratio goes through log1p so
// nearly equal samples lose nothing to cancellation.
inline long double delta_exact(double e_i, double e_ip1) {
  if (!(e_i > 0.0) || !(e_ip1 > 0.0))
    throw NumericalError("delta_exact: steady-state samples must be positive");
  const long double r = (static_cast<long double>(e_i) - e_ip1) / e_ip1;
  const long double l = log1pl(r);
  if (fabsl(l) < 1e-10L) return 0.5L;  // removable singularity
  return delta_from_lambda(l);
}

// Per-interface coefficients of the flux
//   F_{i+1/2} = C [ (1-delta) f_{i+1} + delta f_i ] + kappa (f_{i+1} - f_i)/dx
// with C = kappa * lambda / dx.  All arrays have N-1 entries and are kept in
// long double (see delta_from_lambda).
struct SchemeWeights {
  Grid grid;
  WeightMode mode = WeightMode::exact_equilibrium;
  QuadratureRule rule = QuadratureRule::gauss_legendre_10;  // quadrature mode only
  std::vector<long double> lambda;
  std::vector<long double> C;
  std::vector<long double> delta;
  std::vector<long double> kappa_half;
};

// Cell integrals of (theta_eps + kappa_eps')/kappa_eps, one panel per cell.
inline std::vector<double> compute_lambda(const FPModel& model, const Grid& g,
                                          QuadratureRule rule) {
  std::vector<double> lam(static_cast<std::size_t>(g.N - 1));
  for (int i = 0; i + 1 < g.N; ++i)
    lam[static_cast<std::size_t>(i)] = integrate_finite(
        [&model](double y) { return model.flux_log_gradient(y); }, g.node(i),
        g.node(i + 1), rule, 1);
  return lam;
}

inline SchemeWeights build_weights(const FPModel& model, const Grid& g,
                                   WeightMode mode,
                                   QuadratureRule rule = QuadratureRule::gauss_legendre_10) {
  SchemeWeights w;
  w.grid = g;
  w.mode = mode;
  w.rule = rule;
  const std::size_t m = static_cast<std::size_t>(g.N - 1);
  w.lambda.resize(m);
  w.C.resize(m);
  w.delta.resize(m);
  w.kappa_half.resize(m);

  if (mode == WeightMode::quadrature) {
    const std::vector<double> lam = compute_lambda(model, g, rule);
    for (std::size_t i = 0; i < m; ++i) {
      w.lambda[i] = lam[i];
      w.delta[i] = delta_from_lambda(w.lambda[i]);
    }
  } else {
    const auto& density = model.density();
    double e_i = density.eval(g.node(0));
    for (std::size_t i = 0; i < m; ++i) {
      const double e_ip1 = density.eval(g.node(static_cast<int>(i) + 1));
      if (!(e_i > 0.0) || !(e_ip1 > 0.0))
        throw NumericalError("build_weights: steady state vanishes on the grid");
      const long double r = (static_cast<long double>(e_i) - e_ip1) / e_ip1;
      w.lambda[i] = log1pl(r);
      w.delta[i] = delta_exact(e_i, e_ip1);
      e_i = e_ip1;
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const double kap = model.kappa_eps(g.midpoint(static_cast<int>(i)));
    if (!(kap > 0.0))
      throw NumericalError("build_weights: kappa_eps must be positive at interfaces");
    w.kappa_half[i] = kap;
    w.C[i] = w.kappa_half[i] * w.lambda[i] / static_cast<long double>(g.dx);
    if (!(w.delta[i] > 0.0L) || !(w.delta[i] < 1.0L))
      throw NumericalError("build_weights: delta outside (0,1) at interface " +
                           std::to_string(i));
  }
  return w;
}

namespace scheme_detail {

// Interface flux in extended precision.  The steady state is encoded as an
// exact cancellation between the advective and diffusive halves; the terminal
// steady-state error inherits whatever precision this combination (and the
// state it acts on) carries, which is why the march runs on long double
// vectors while I/O stays double.
template <class T>
long double flux_l(const SchemeWeights& w, const std::vector<T>& f,
                   std::size_t i) {
  const long double fi = f[i];
  const long double fip1 = f[i + 1];
  return w.C[i] * ((1.0L - w.delta[i]) * fip1 + w.delta[i] * fi) +
         w.kappa_half[i] * (fip1 - fi) / static_cast<long double>(w.grid.dx);
}

}  // namespace scheme_detail

// F_{i+1/2} for interface i in [0, N-2].
template <class T>
double numerical_flux(const SchemeWeights& w, const std::vector<T>& f, int i) {
  return static_cast<double>(scheme_detail::flux_l(w, f, static_cast<std::size_t>(i)));
}

// Conservative divided flux differences with no-flux boundaries:
// out_i = (F_{i+1/2} - F_{i-1/2}) / dx, F at the domain edges = 0.
template <class T>
void rhs(const SchemeWeights& w, const std::vector<T>& f, std::vector<T>& out) {
  const std::size_t n = f.size();
  if (n != static_cast<std::size_t>(w.grid.N))
    throw NumericalError("rhs: field size does not match weights");
  out.resize(n);
  const long double dx = w.grid.dx;
  long double prev = 0.0L;  // flux through the left boundary
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const long double cur = scheme_detail::flux_l(w, f, i);
    out[i] = static_cast<T>((cur - prev) / dx);
    prev = cur;
  }
  out[n - 1] = static_cast<T>((0.0L - prev) / dx);
}

template <class T>
std::vector<T> rhs(const SchemeWeights& w, const std::vector<T>& f) {
  std::vector<T> out;
  rhs(w, f, out);
  return out;
}

// Tridiagonal bands of the rhs operator (row i: lower_i f_{i-1} + diag_i f_i
// + upper_i f_{i+1}); used by the implicit integrator.  Column sums vanish
// (mass conservation), off-diagonals are nonnegative (M-matrix structure).
struct TridiagonalOperator {
  std::vector<long double> lower, diag, upper;
};

inline TridiagonalOperator rhs_operator(const SchemeWeights& w) {
  const std::size_t n = static_cast<std::size_t>(w.grid.N);
  TridiagonalOperator op;
  op.lower.assign(n, 0.0L);
  op.diag.assign(n, 0.0L);
  op.upper.assign(n, 0.0L);
  const long double dx = w.grid.dx;
  // Flux coefficients: F_{i+1/2} = a_i f_i + b_i f_{i+1}.
  std::vector<long double> a(n - 1), b(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const long double k = w.kappa_half[i] / dx;
    a[i] = w.C[i] * w.delta[i] - k;
    b[i] = w.C[i] * (1.0L - w.delta[i]) + k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    long double diag = 0.0L;
    if (i + 1 < n) {  // outgoing flux F_{i+1/2}
      diag += a[i];
      op.upper[i] = b[i] / dx;
    }
    if (i > 0) {  // incoming flux F_{i-1/2}
      diag -= b[i - 1];
      op.lower[i] = -a[i - 1] / dx;
    }
    op.diag[i] = diag / dx;
  }
  return op;
}

}  // namespace subfp
