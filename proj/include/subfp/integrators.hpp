#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "subfp/scheme.hpp"
#include "subfp/util.hpp"

namespace subfp {

enum class TimeIntegrator { rk4, ssp_rk3, implicit_euler };

inline const char* to_string(TimeIntegrator m) {
  switch (m) {
    case TimeIntegrator::rk4: return "rk4";
    case TimeIntegrator::ssp_rk3: return "ssp_rk3";
    case TimeIntegrator::implicit_euler: return "implicit_euler";
  }
  return "?";
}

// The marching state is long double end to end (see scheme_detail::flux_l);
// convert to double only at recording/output boundaries.
struct SolverState {
  double t = 0.0;
  long step = 0;
  std::vector<long double> f;
};

// Positivity-preserving bound for forward-Euler-type steps:
// dt <= dx^2 / (2 (M dx + D)), M = max |C|, D = max kappa.
inline double cfl_dt_explicit(const SchemeWeights& w) {
  double M = 0.0, D = 0.0;
  for (std::size_t i = 0; i < w.C.size(); ++i) {
    M = std::max(M, static_cast<double>(fabsl(w.C[i])));
    D = std::max(D, static_cast<double>(w.kappa_half[i]));
  }
  return w.grid.dx * w.grid.dx / (2.0 * (M * w.grid.dx + D));
}

// The implicit update is positivity-preserving under dt <= dx / (2 M);
// pure diffusion (M = 0) has no restriction at all.
inline double cfl_dt_implicit(const SchemeWeights& w) {
  double M = 0.0;
  for (long double c : w.C) M = std::max(M, static_cast<double>(fabsl(c)));
  if (M == 0.0) return std::numeric_limits<double>::infinity();
  return w.grid.dx / (2.0 * M);
}

// Thomas algorithm.  The systems solved here are M-matrices (positive
// diagonal, nonpositive off-diagonals, columnwise dominant), so elimination
// without pivoting is stable and the solution of a nonnegative right-hand
// side stays nonnegative.
template <class T>
std::vector<T> tridiagonal_solve(const std::vector<T>& lower,
                                 const std::vector<T>& diag,
                                 const std::vector<T>& upper,
                                 const std::vector<T>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw NumericalError("tridiagonal_solve: band size mismatch");
  std::vector<T> c(n), d(n), x(n);
  T piv = diag[0];
  if (std::abs(piv) < 1e-300)
    throw NumericalError("tridiagonal_solve: zero pivot in row 0");
  c[0] = upper[0] / piv;
  d[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * c[i - 1];
    if (std::abs(piv) < 1e-300)
      throw NumericalError("tridiagonal_solve: vanishing pivot in row " +
                           std::to_string(i));
    c[i] = upper[i] / piv;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

namespace integ_detail {

inline void check_finite(const std::vector<long double>& v, const char* where,
                         double t) {
  for (long double x : v)
    if (!std::isfinite(x))
      throw NumericalError(std::string("advance: non-finite value in ") + where +
                           " at t = " + format_g17(t));
}

inline void axpy(std::vector<long double>& out, const std::vector<long double>& f,
                 long double a, const std::vector<long double>& k) {
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] + a * k[i];
}

}  // namespace integ_detail

// One time step of size dt.  Explicit methods evaluate the scheme rhs in
// stages; implicit Euler solves (I - dt A) f_new = f.  All methods conserve
// the discrete mass identically (up to roundoff).  Positivity: guaranteed
// for ssp_rk3 and implicit_euler under their CFL bounds, only monitored for
// rk4 -- an excursion below -1e-12 aborts the run.
inline void advance(SolverState& s, const SchemeWeights& w, TimeIntegrator m,
                    double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ConfigError("advance: dt must be positive and finite");
  const std::size_t n = s.f.size();
  const long double h = dt;
  switch (m) {
    case TimeIntegrator::rk4: {
      std::vector<long double> k1, k2, k3, k4, tmp(n);
      rhs(w, s.f, k1);
      integ_detail::check_finite(k1, "stage 1", s.t);
      integ_detail::axpy(tmp, s.f, 0.5L * h, k1);
      rhs(w, tmp, k2);
      integ_detail::check_finite(k2, "stage 2", s.t);
      integ_detail::axpy(tmp, s.f, 0.5L * h, k2);
      rhs(w, tmp, k3);
      integ_detail::check_finite(k3, "stage 3", s.t);
      integ_detail::axpy(tmp, s.f, h, k3);
      rhs(w, tmp, k4);
      integ_detail::check_finite(k4, "stage 4", s.t);
      const long double c = h / 6.0L;
      for (std::size_t i = 0; i < n; ++i)
        s.f[i] += c * (k1[i] + 2.0L * (k2[i] + k3[i]) + k4[i]);
      break;
    }
    case TimeIntegrator::ssp_rk3: {
      // Shu-Osher form: convex combinations of forward Euler steps.
      std::vector<long double> k, u1(n), u2(n);
      rhs(w, s.f, k);
      integ_detail::check_finite(k, "stage 1", s.t);
      integ_detail::axpy(u1, s.f, h, k);
      rhs(w, u1, k);
      integ_detail::check_finite(k, "stage 2", s.t);
      for (std::size_t i = 0; i < n; ++i)
        u2[i] = 0.75L * s.f[i] + 0.25L * (u1[i] + h * k[i]);
      rhs(w, u2, k);
      integ_detail::check_finite(k, "stage 3", s.t);
      for (std::size_t i = 0; i < n; ++i)
        s.f[i] = s.f[i] / 3.0L + (2.0L / 3.0L) * (u2[i] + h * k[i]);
      break;
    }
    case TimeIntegrator::implicit_euler: {
      const TridiagonalOperator A = rhs_operator(w);
      std::vector<long double> lower(n), diag(n), upper(n);
      for (std::size_t i = 0; i < n; ++i) {
        lower[i] = -h * A.lower[i];
        diag[i] = 1.0L - h * A.diag[i];
        upper[i] = -h * A.upper[i];
      }
      s.f = tridiagonal_solve(lower, diag, upper, s.f);
      integ_detail::check_finite(s.f, "implicit solve", s.t);
      break;
    }
  }
  for (long double x : s.f) {
    if (!std::isfinite(x))
      throw NumericalError("advance: non-finite state at t = " + format_g17(s.t));
    if (x < -1e-12L)
      throw NumericalError("advance: positivity violated (min f = " +
                           format_g17(static_cast<double>(x)) + ") at t = " +
                           format_g17(s.t + dt));
  }
  s.t += dt;
  s.step += 1;
}

}  // namespace subfp
