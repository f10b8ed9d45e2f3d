// Command-line driver for the confined Fokker-Planck solver.
//
// Runs one experiment (or a parameter sweep) and writes diagnostics.csv,
// solution.csv and run_manifest.txt into the output directory.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <future>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "subfp/runner.hpp"

namespace {

struct Job {
  std::string label;
  subfp::RunConfig cfg;
};

int run_job(const Job& job) {
  try {
    const subfp::RunResult res = subfp::run_experiment(job.cfg);
    subfp::emit_outputs(res);
    for (const auto& w : res.warnings)
      std::fprintf(stderr, "[%s] warning: %s\n", job.label.c_str(), w.c_str());
    const auto& last = res.series.back();
    std::printf("[%s] ok: %ld steps, dt = %s, final rel_l1 = %s -> %s\n",
                job.label.c_str(), res.steps, subfp::format_g(res.dt).c_str(),
                subfp::format_g(last.rel_l1).c_str(), job.cfg.out_dir.c_str());
    return 0;
  } catch (const subfp::ConfigError& e) {
    std::fprintf(stderr, "[%s] configuration error: %s\n", job.label.c_str(),
                 e.what());
    return 2;
  } catch (const subfp::NumericalError& e) {
    std::fprintf(stderr, "[%s] numerical failure: %s\n", job.label.c_str(),
                 e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[%s] error: %s\n", job.label.c_str(), e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  using subfp::DtRule;
  using subfp::InitialKind;
  using subfp::RunFamily;
  using subfp::TimeIntegrator;
  using subfp::WeightChoice;

  subfp::RunConfig cfg;
  std::vector<double> sweep_beta, sweep_eps;

  CLI::App app{"Finite-volume solver for Fokker-Planck equations with "
               "subcritical tanh confinement"};
  app.set_config("--config", "", "Read options from an INI/TOML file");

  const std::map<std::string, RunFamily> family_map{
      {"gaussian", RunFamily::gaussian},
      {"gauss", RunFamily::gaussian},
      {"1", RunFamily::gaussian},
      {"generalized-gaussian", RunFamily::generalized_gaussian},
      {"gg", RunFamily::generalized_gaussian},
      {"2", RunFamily::generalized_gaussian}};
  const std::map<std::string, TimeIntegrator> integrator_map{
      {"rk4", TimeIntegrator::rk4},
      {"ssp-rk3", TimeIntegrator::ssp_rk3},
      {"ssp_rk3", TimeIntegrator::ssp_rk3},
      {"implicit-euler", TimeIntegrator::implicit_euler},
      {"implicit_euler", TimeIntegrator::implicit_euler},
      {"implicit", TimeIntegrator::implicit_euler}};
  const std::map<std::string, WeightChoice> weight_map{
      {"sp2", WeightChoice::sp2},
      {"sp4", WeightChoice::sp4},
      {"sp6", WeightChoice::sp6},
      {"spg", WeightChoice::spG},
      {"exact", WeightChoice::exact}};
  const std::map<std::string, InitialKind> initial_map{
      {"bimodal", InitialKind::bimodal},
      {"equilibrium", InitialKind::equilibrium},
      {"custom", InitialKind::custom}};
  const std::map<std::string, DtRule> dt_rule_map{
      {"dx2-over-l", DtRule::dx2_over_L},
      {"dx2_over_l", DtRule::dx2_over_L},
      {"cfl", DtRule::cfl},
      {"fixed", DtRule::explicit_value}};

  app.add_option("--test", cfg.test,
                 "Equilibrium family: gaussian (test 1) or "
                 "generalized-gaussian (test 2)")
      ->transform(CLI::CheckedTransformer(family_map, CLI::ignore_case));
  app.add_option("--beta", cfg.beta,
                 "Tail exponent of the generalized Gaussian (> 1/2)");
  app.add_option("--eps", cfg.eps, "Drift steepness parameter")
      ->check(CLI::PositiveNumber);
  app.add_option("--L", cfg.L, "Half-width of the domain [-L, L]")
      ->check(CLI::PositiveNumber);
  app.add_option("--N", cfg.N, "Number of grid nodes")->check(CLI::Range(3, 1 << 22));
  app.add_option("--T", cfg.T, "Final time")->check(CLI::PositiveNumber);
  auto* dt_opt =
      app.add_option("--dt", cfg.dt, "Time step (implies --dt-rule fixed)")
          ->check(CLI::PositiveNumber);
  auto* dt_rule_opt =
      app.add_option("--dt-rule", cfg.dt_rule,
                     "Time-step rule: dx2-over-l, cfl, or fixed")
          ->transform(CLI::CheckedTransformer(dt_rule_map, CLI::ignore_case));
  app.add_option("--integrator", cfg.integrator,
                 "Time integrator: rk4, ssp-rk3, or implicit-euler")
      ->transform(CLI::CheckedTransformer(integrator_map, CLI::ignore_case));
  app.add_option("--weights", cfg.weights,
                 "Flux weights: sp2/sp4/sp6/spG (quadrature order) or exact")
      ->transform(CLI::CheckedTransformer(weight_map, CLI::ignore_case));
  app.add_option("--initial", cfg.initial,
                 "Initial datum: bimodal, equilibrium, or custom")
      ->transform(CLI::CheckedTransformer(initial_map, CLI::ignore_case));
  app.add_option("--initial-file", cfg.initial_file,
                 "Two-column file (x, f) for --initial custom");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--record-every", cfg.record_every,
                 "Record diagnostics every k steps")
      ->check(CLI::PositiveNumber);
  app.add_option("--dp", cfg.dp_exponent,
                 "Exponent p of the d_p distance (1/2 <= p <= 1)")
      ->check(CLI::Range(0.5, 1.0));
  app.add_option("--quad-tol", cfg.quad_tol, "Quadrature tolerance")
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict-cfl", cfg.strict_cfl,
               "Refuse (or cap) time steps above the CFL bound");
  app.add_flag("--plots", cfg.plots, "Also write SVG plots");
  app.add_option("--sweep-beta", sweep_beta,
                 "Run once per beta value, into <out>/beta_<v>/");
  app.add_option("--sweep-eps", sweep_eps,
                 "Run once per eps value, into <out>/eps_<v>/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (dt_opt->count() > 0 && dt_rule_opt->count() == 0)
    cfg.dt_rule = DtRule::explicit_value;
  if (cfg.dt_rule == DtRule::explicit_value && !(cfg.dt > 0.0)) {
    std::fprintf(stderr, "configuration error: --dt-rule fixed requires --dt\n");
    return 2;
  }

  std::vector<Job> jobs;
  namespace fs = std::filesystem;
  if (sweep_beta.empty() && sweep_eps.empty()) {
    jobs.push_back({"run", cfg});
  } else {
    if (!sweep_beta.empty() && cfg.test != RunFamily::generalized_gaussian) {
      std::fprintf(stderr,
                   "configuration error: --sweep-beta needs --test "
                   "generalized-gaussian\n");
      return 2;
    }
    std::vector<std::pair<std::string, subfp::RunConfig>> stage;
    if (!sweep_beta.empty()) {
      for (double b : sweep_beta) {
        subfp::RunConfig c = cfg;
        c.beta = b;
        stage.emplace_back("beta_" + subfp::format_g(b), c);
      }
    } else {
      stage.emplace_back("", cfg);
    }
    for (auto& [name, c] : stage) {
      if (sweep_eps.empty()) {
        subfp::RunConfig cc = c;
        cc.out_dir = (fs::path(cfg.out_dir) / name).string();
        jobs.push_back({name, cc});
      } else {
        for (double e : sweep_eps) {
          subfp::RunConfig cc = c;
          cc.eps = e;
          const std::string label =
              (name.empty() ? "" : name + "_") + "eps_" + subfp::format_g(e);
          cc.out_dir = (fs::path(cfg.out_dir) / label).string();
          jobs.push_back({label, cc});
        }
      }
    }
  }

  std::vector<std::future<int>> futures;
  futures.reserve(jobs.size());
  for (const auto& job : jobs)
    futures.push_back(std::async(std::launch::async, run_job, job));
  int worst = 0;
  for (auto& fut : futures) worst = std::max(worst, fut.get());
  return worst;
}
