#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subfp/density.hpp"
#include "subfp/diagnostics.hpp"
#include "subfp/grid.hpp"
#include "subfp/integrators.hpp"
#include "subfp/model.hpp"
#include "subfp/scheme.hpp"
#include "subfp/util.hpp"

namespace subfp {

enum class RunFamily { gaussian, generalized_gaussian };
enum class WeightChoice { sp2, sp4, sp6, spG, exact };
enum class InitialKind { bimodal, equilibrium, custom };
enum class DtRule { dx2_over_L, cfl, explicit_value };

inline const char* to_string(RunFamily f) {
  return f == RunFamily::gaussian ? "gaussian" : "generalized_gaussian";
}
inline const char* to_string(WeightChoice w) {
  switch (w) {
    case WeightChoice::sp2: return "sp2";
    case WeightChoice::sp4: return "sp4";
    case WeightChoice::sp6: return "sp6";
    case WeightChoice::spG: return "spG";
    case WeightChoice::exact: return "exact";
  }
  return "?";
}
inline const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::bimodal: return "bimodal";
    case InitialKind::equilibrium: return "equilibrium";
    case InitialKind::custom: return "custom";
  }
  return "?";
}
inline const char* to_string(DtRule r) {
  switch (r) {
    case DtRule::dx2_over_L: return "dx2_over_L";
    case DtRule::cfl: return "cfl";
    case DtRule::explicit_value: return "explicit";
  }
  return "?";
}

struct RunConfig {
  RunFamily test = RunFamily::gaussian;
  double beta = 3.0;  // generalized Gaussian only
  double eps = 0.01;
  double L = 5.0;
  int N = 101;
  double T = 40.0;
  DtRule dt_rule = DtRule::dx2_over_L;  // dt = dx^2 / L
  double dt = 0.0;                         // explicit_value only
  TimeIntegrator integrator = TimeIntegrator::rk4;
  WeightChoice weights = WeightChoice::exact;
  InitialKind initial = InitialKind::bimodal;
  std::string initial_file;  // custom only
  std::string out_dir = "out";
  int record_every = 50;
  double dp_exponent = 0.75;
  double quad_tol = 1e-12;
  bool strict_cfl = false;
  bool plots = false;
};

struct RunResult {
  RunConfig config;
  Grid grid;
  std::vector<double> equilibrium;  // renormalized to unit discrete mass
  SolverState state;                // final state (long double internally)
  std::vector<DiagnosticRecord> series;
  double dt = 0.0;
  long steps = 0;
  double cfl_explicit = 0.0;
  double cfl_implicit = 0.0;
  double min_f = 0.0;  // over the whole trajectory, every step
  std::vector<std::string> warnings;

  std::vector<double> final_f() const {
    return std::vector<double>(state.f.begin(), state.f.end());
  }
};

inline DensityModel make_density(const RunConfig& cfg) {
  return cfg.test == RunFamily::gaussian
             ? DensityModel::gaussian()
             : DensityModel::generalized_gaussian(cfg.beta);
}

inline WeightMode weight_mode(WeightChoice c) {
  return c == WeightChoice::exact ? WeightMode::exact_equilibrium
                                  : WeightMode::quadrature;
}

inline QuadratureRule weight_rule(WeightChoice c) {
  switch (c) {
    case WeightChoice::sp2: return QuadratureRule::newton_cotes_2;
    case WeightChoice::sp4: return QuadratureRule::newton_cotes_4;
    case WeightChoice::sp6: return QuadratureRule::newton_cotes_6;
    default: return QuadratureRule::gauss_legendre_10;
  }
}

// Initial datum on the grid, normalized to discrete mass exactly 1.
inline Field build_initial(const RunConfig& cfg, const Grid& g,
                           const DensityModel& density) {
  Field f(g);
  switch (cfg.initial) {
    case InitialKind::bimodal:
      // Two Gaussian bumps at +-1; far from equilibrium for every family.
      for (int i = 0; i < g.N; ++i) {
        const double x = g.node(i);
        f[i] = std::exp(-2.5 * (x - 1.0) * (x - 1.0)) +
               std::exp(-2.5 * (x + 1.0) * (x + 1.0));
      }
      break;
    case InitialKind::equilibrium:
      for (int i = 0; i < g.N; ++i) f[i] = density.eval(g.node(i));
      break;
    case InitialKind::custom: {
      if (cfg.initial_file.empty())
        throw ConfigError("custom initial datum requires a file path");
      std::ifstream in(cfg.initial_file);
      if (!in) throw ConfigError("cannot open initial datum: " + cfg.initial_file);
      std::vector<double> vals;
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        const auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        double x, v;
        if (!(ls >> x)) continue;
        if (!(ls >> v))
          throw ConfigError(cfg.initial_file + ":" + std::to_string(lineno) +
                            ": expected two columns (x, f)");
        if (!(v >= 0.0) || !std::isfinite(v))
          throw ConfigError(cfg.initial_file + ":" + std::to_string(lineno) +
                            ": initial values must be nonnegative and finite");
        vals.push_back(v);
      }
      if (static_cast<int>(vals.size()) != g.N)
        throw ConfigError(cfg.initial_file + ": expected " + std::to_string(g.N) +
                          " rows, found " + std::to_string(vals.size()));
      f.v = std::move(vals);
      break;
    }
  }
  const double mass = discrete_mass(f);
  if (!(mass > 0.0))
    throw ConfigError("initial datum has nonpositive mass");
  for (double& x : f.v) x /= mass;
  return f;
}

namespace run_detail {

inline DiagnosticRecord make_record(const RunConfig& cfg, const Grid& g,
                                    const std::vector<long double>& state_f,
                                    const std::vector<double>& ebar,
                                    const SchemeWeights& w, double t) {
  const std::vector<double> f(state_f.begin(), state_f.end());
  DiagnosticRecord r;
  r.t = t;
  NeumaierSum m;
  for (double x : f) m.add(x);
  r.mass = g.dx * m.value();
  r.entropy = discrete_entropy(f, ebar, g.dx);
  r.dissipation = discrete_dissipation(f, ebar, w, &r.log_floored);
  r.hellinger = hellinger_distance(f, ebar, g.dx);
  r.rel_l1 = relative_l1_error(f, ebar);
  r.d_p = d_p_functional(f, ebar, g.dx, cfg.dp_exponent);
  if (cfg.test == RunFamily::generalized_gaussian && cfg.dp_exponent > 0.5)
    r.moment = moment_functional(Field(g, f), cfg.dp_exponent, cfg.beta);
  return r;
}

}  // namespace run_detail

// Full experiment: build model/grid/weights, march to T, record diagnostics
// every record_every steps (plus the initial and final states).
inline RunResult run_experiment(const RunConfig& cfg) {
  if (!(cfg.T > 0.0)) throw ConfigError("run: T must be positive");
  if (cfg.record_every < 1) throw ConfigError("run: record_every must be >= 1");
  if (cfg.test == RunFamily::generalized_gaussian && !(cfg.beta > 0.5))
    throw ConfigError("run: generalized Gaussian requires beta > 1/2");

  RunResult res;
  res.config = cfg;
  res.grid = build_grid(cfg.L, cfg.N);
  const DensityModel density = make_density(cfg);
  const FPModel model(density, cfg.eps, cfg.quad_tol);
  const SchemeWeights w = build_weights(model, res.grid, weight_mode(cfg.weights),
                                        weight_rule(cfg.weights));

  res.cfl_explicit = cfl_dt_explicit(w);
  res.cfl_implicit = cfl_dt_implicit(w);
  const bool explicit_method = cfg.integrator != TimeIntegrator::implicit_euler;
  const double bound = explicit_method ? res.cfl_explicit : res.cfl_implicit;

  double dt = 0.0;
  switch (cfg.dt_rule) {
    case DtRule::dx2_over_L:
      dt = res.grid.dx * res.grid.dx / cfg.L;
      if (dt > bound) {
        if (cfg.strict_cfl) {
          res.warnings.push_back("dt = dx^2/L = " + format_g(dt) +
                                 " exceeds the CFL bound " + format_g(bound) +
                                 "; capped");
          dt = bound;
        } else {
          res.warnings.push_back("dt = dx^2/L = " + format_g(dt) +
                                 " exceeds the CFL bound " + format_g(bound) +
                                 "; positivity is monitored, not guaranteed");
        }
      }
      break;
    case DtRule::cfl:
      dt = bound;
      if (!std::isfinite(dt))
        throw ConfigError("run: implicit CFL bound is unbounded here; pass an explicit dt");
      break;
    case DtRule::explicit_value:
      if (!(cfg.dt > 0.0)) throw ConfigError("run: explicit dt must be positive");
      dt = cfg.dt;
      if (dt > bound) {
        if (cfg.strict_cfl)
          throw ConfigError("run: dt = " + format_g(dt) +
                            " exceeds the CFL bound " + format_g(bound) +
                            " (strict-cfl)");
        res.warnings.push_back("dt = " + format_g(dt) +
                               " exceeds the CFL bound " + format_g(bound));
      }
      break;
  }
  res.dt = dt;

  // Diagnostics compare against equilibrium samples renormalized to unit
  // discrete mass; the raw samples miss the tail mass outside [-L, L], which
  // would floor every distance at the truncation level instead of roundoff.
  res.equilibrium.resize(static_cast<std::size_t>(cfg.N));
  for (int i = 0; i < cfg.N; ++i)
    res.equilibrium[static_cast<std::size_t>(i)] = density.eval(res.grid.node(i));
  {
    NeumaierSum m;
    for (double x : res.equilibrium) m.add(x);
    const double mass = res.grid.dx * m.value();
    for (double& x : res.equilibrium) x /= mass;
  }

  Field f0 = build_initial(cfg, res.grid, density);
  res.state.t = 0.0;
  res.state.step = 0;
  res.state.f.assign(f0.v.begin(), f0.v.end());

  res.series.push_back(
      run_detail::make_record(cfg, res.grid, res.state.f, res.equilibrium, w, 0.0));

  const double mass0 = res.series.front().mass;
  long double running_min = res.state.f.empty() ? 0.0L : res.state.f.front();
  for (long double x : res.state.f) running_min = std::min(running_min, x);
  long step = 0;
  while (res.state.t < cfg.T - 1e-12 * cfg.T) {
    const double step_dt = std::min(dt, cfg.T - res.state.t);
    advance(res.state, w, cfg.integrator, step_dt);
    for (long double x : res.state.f) running_min = std::min(running_min, x);
    ++step;
    const bool last = res.state.t >= cfg.T - 1e-12 * cfg.T;
    if (step % cfg.record_every == 0 || last) {
      res.series.push_back(run_detail::make_record(cfg, res.grid, res.state.f,
                                                   res.equilibrium, w,
                                                   res.state.t));
      const double drift = std::abs(res.series.back().mass - mass0) /
                           std::abs(mass0);
      if (drift > 1e-12)
        throw NumericalError("run: discrete mass drifted by " + format_g(drift) +
                             " at t = " + format_g(res.state.t));
    }
  }
  res.steps = step;
  res.min_f = static_cast<double>(running_min);
  return res;
}

// ---- output emission ----------------------------------------------------

namespace run_detail {

inline void write_svg_polyline(std::ostream& os,
                               const std::vector<double>& xs,
                               const std::vector<double>& ys, double w, double h,
                               const char* color) {
  double xmin = xs.front(), xmax = xs.front(), ymin = ys.front(), ymax = ys.front();
  for (double x : xs) { xmin = std::min(xmin, x); xmax = std::max(xmax, x); }
  for (double y : ys) { ymin = std::min(ymin, y); ymax = std::max(ymax, y); }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  os << "<polyline fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double px = 45 + (xs[i] - xmin) / (xmax - xmin) * (w - 60);
    const double py = h - 30 - (ys[i] - ymin) / (ymax - ymin) * (h - 50);
    os << format_g(px) << "," << format_g(py) << " ";
  }
  os << "\"/>\n";
}

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::vector<double>& xs,
                           const std::vector<std::vector<double>>& curves,
                           const std::vector<const char*>& colors) {
  std::ofstream os(path);
  const double w = 640, h = 400;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"20\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
     << title << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c)
    write_svg_polyline(os, xs, curves[c], w, h, colors[c % colors.size()]);
  os << "</svg>\n";
}

}  // namespace run_detail

// Writes diagnostics.csv, solution.csv, run_manifest.txt (and SVG plots when
// requested) into cfg.out_dir.  All reals use %.17g so files round-trip.
inline void emit_outputs(const RunResult& res) {
  const RunConfig& cfg = res.config;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  {
    std::ofstream os(fs::path(cfg.out_dir) / "diagnostics.csv");
    os << "t,mass,entropy,dissipation,hellinger,rel_l1,d_p,moment\n";
    for (const auto& r : res.series) {
      os << format_g17(r.t) << ',' << format_g17(r.mass) << ','
         << format_g17(r.entropy) << ',' << format_g17(r.dissipation) << ','
         << format_g17(r.hellinger) << ',' << format_g17(r.rel_l1) << ','
         << format_g17(r.d_p) << ',';
      if (r.moment) os << format_g17(*r.moment);
      os << '\n';
    }
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "solution.csv");
    os << "x,f,e\n";
    for (int i = 0; i < res.grid.N; ++i)
      os << format_g17(res.grid.node(i)) << ','
         << format_g17(static_cast<double>(res.state.f[static_cast<std::size_t>(i)]))
         << ',' << format_g17(res.equilibrium[static_cast<std::size_t>(i)]) << '\n';
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "run_manifest.txt");
    os << "test = " << to_string(cfg.test) << '\n';
    os << "beta = " << format_g17(cfg.beta) << '\n';
    os << "eps = " << format_g17(cfg.eps) << '\n';
    os << "L = " << format_g17(cfg.L) << '\n';
    os << "N = " << cfg.N << '\n';
    os << "T = " << format_g17(cfg.T) << '\n';
    os << "dt_rule = " << to_string(cfg.dt_rule) << '\n';
    os << "dt = " << format_g17(res.dt) << '\n';
    os << "integrator = " << to_string(cfg.integrator) << '\n';
    os << "weights = " << to_string(cfg.weights) << '\n';
    os << "initial = " << to_string(cfg.initial) << '\n';
    os << "initial_file = " << cfg.initial_file << '\n';
    os << "out_dir = " << cfg.out_dir << '\n';
    os << "record_every = " << cfg.record_every << '\n';
    os << "dp_exponent = " << format_g17(cfg.dp_exponent) << '\n';
    os << "quad_tol = " << format_g17(cfg.quad_tol) << '\n';
    os << "strict_cfl = " << (cfg.strict_cfl ? "true" : "false") << '\n';
    os << "plots = " << (cfg.plots ? "true" : "false") << '\n';
    os << "dx = " << format_g17(res.grid.dx) << '\n';
    os << "steps = " << res.steps << '\n';
    os << "cfl_dt_explicit = " << format_g17(res.cfl_explicit) << '\n';
    os << "cfl_dt_implicit = " << format_g17(res.cfl_implicit) << '\n';
    os << "min_f = " << format_g17(res.min_f) << '\n';
    for (const auto& warn : res.warnings) os << "warning = " << warn << '\n';
  }
  if (cfg.plots) {
    std::vector<double> ts, logH;
    for (const auto& r : res.series)
      if (r.entropy > 0) {
        ts.push_back(r.t);
        logH.push_back(std::log10(r.entropy));
      }
    if (ts.size() >= 2)
      run_detail::write_svg_plot(
          (fs::path(cfg.out_dir) / "entropy_decay.svg").string(),
          "log10 relative entropy vs t", ts, {logH}, {"#1f6fb2"});
    std::vector<double> xs, fv, ev;
    for (int i = 0; i < res.grid.N; ++i) {
      xs.push_back(res.grid.node(i));
      fv.push_back(res.state.f[static_cast<std::size_t>(i)]);
      ev.push_back(res.equilibrium[static_cast<std::size_t>(i)]);
    }
    run_detail::write_svg_plot(
        (fs::path(cfg.out_dir) / "solution_overlay.svg").string(),
        "final f (blue) vs equilibrium (orange)", xs, {fv, ev},
        {"#1f6fb2", "#e07b39"});
  }
}

}  // namespace subfp
