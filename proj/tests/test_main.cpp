#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subfp/runner.hpp"

TEST_CASE("headers compile and a trivial run completes") {
  subfp::RunConfig cfg;
  cfg.T = 0.01;
  cfg.N = 21;
  cfg.record_every = 1;
  cfg.out_dir = "smoke_out";
  const subfp::RunResult res = subfp::run_experiment(cfg);
  CHECK(res.series.size() >= 2);
  CHECK(res.series.back().mass == doctest::Approx(1.0).epsilon(1e-12));
}
