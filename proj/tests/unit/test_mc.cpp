#include <cstdlib>

#include "doctest.h"
#include "membrane/closure.hpp"
#include "membrane/error.hpp"
#include "membrane/mc.hpp"

using namespace membrane;

namespace {

SweepConfig small_closure() {
  SweepConfig cfg;
  cfg.lambdas = {0.35, 1.0};
  cfg.window = 20.0;
  cfg.pad = 5.0;
  cfg.trials = 8;
  cfg.seed = 99;
  return cfg;
}

int generation_or_max(const std::optional<int>& g) { return g ? *g : 1 << 20; }

}  // namespace

TEST_CASE("one trial matches a direct closure run") {
  SweepConfig cfg;
  cfg.lambdas = {0.3};
  cfg.window = 12.0;
  cfg.pad = 3.0;
  cfg.seed = 5;
  const ResultTable t = run_sweep(cfg);
  REQUIRE(t.rows.size() == 1);
  const TrialRow& row = t.rows[0];
  CHECK(row.seed == trial_seed(5, 0, 0));

  const Scene scene = sample_poisson_scene(square_window(12.0), 3.0, 0.3, FixedDisk{1.0}, row.seed);
  const ClosureResult direct = closure_run(scene, square_window(12.0));
  CHECK(row.holes == scene.holes.size());
  CHECK(row.covering_generation == direct.report.covering_generation);
  CHECK(row.fixed_point_generation == direct.report.fixed_point_generation);
  CHECK(row.censored == !direct.report.covering_generation.has_value());
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig cfg = small_closure();
  cfg.threads = 1;
  const std::string a = sweep_csv(run_sweep(cfg));
  cfg.threads = 4;
  const std::string b = sweep_csv(run_sweep(cfg));
  const std::string c = sweep_csv(run_sweep(cfg));
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(a.find(",NA\n") != std::string::npos);
}

TEST_CASE("denser scenes cover sooner") {
  const ResultTable t = run_sweep(small_closure());
  const auto s = summarize(t);
  REQUIRE(s.size() == 2);
  CHECK(s[0].trials == 8);
  REQUIRE(s[0].median.has_value());
  REQUIRE(s[1].median.has_value());
  CHECK(*s[1].median < *s[0].median);
  CHECK(s[1].censored_fraction == 0.0);
  REQUIRE(!s[0].mean_area_curve.empty());
  for (std::size_t g = 1; g < s[0].mean_area_curve.size(); ++g) {
    CHECK(s[0].mean_area_curve[g] >= s[0].mean_area_curve[g - 1] - 1e-12);
  }
  const std::string curves = area_curve_csv(s);
  CHECK(curves.rfind("lambda,generation,mean_covered_area_fraction\n", 0) == 0);
}

TEST_CASE("superposed layers never cover later") {
  const Window core = square_window(10.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene sparse = sample_poisson_scene(core, 2.5, 0.3, FixedDisk{1.0}, seed);
    const Scene dense = superpose(sparse, 0.4, FixedDisk{1.0}, seed + 1000);
    const auto a = closure_run(sparse, core).report.covering_generation;
    const auto b = closure_run(dense, core).report.covering_generation;
    CHECK(generation_or_max(b) <= generation_or_max(a));
  }
}

TEST_CASE("summaries") {
  ResultTable t;
  auto row = [](double lambda, std::size_t li, int trial, std::optional<int> g) {
    TrialRow r;
    r.lambda = lambda;
    r.lambda_index = li;
    r.trial = trial;
    r.covering_generation = g;
    r.censored = !g;
    return r;
  };
  t.rows = {row(1.0, 0, 0, 7)};
  auto s = summarize(t);
  CHECK(s[0].median == 7);

  t.rows = {row(1.0, 0, 0, 5), row(1.0, 0, 1, 3), row(1.0, 0, 2, 7), row(2.0, 1, 0, std::nullopt),
            row(2.0, 1, 1, std::nullopt)};
  s = summarize(t);
  REQUIRE(s.size() == 2);
  CHECK(s[0].median == 5);
  CHECK(s[0].p10 == 3);
  CHECK(s[0].p90 == 7);
  CHECK_FALSE(s[1].median.has_value());
  CHECK(s[1].censored_fraction == 1.0);
  const std::string csv = summary_csv(s);
  CHECK(csv.find("censored,censored,censored") != std::string::npos);

  CHECK(nearest_rank({1, 2, 3, 4}, 0.5) == 2);
  CHECK(nearest_rank({4}, 0.1) == 4);
  CHECK_THROWS_AS(summarize(ResultTable{}), Error);
}

TEST_CASE("hole cap skips trials visibly") {
  SweepConfig cfg = small_closure();
  cfg.max_holes = 500;
  const ResultTable t = run_sweep(cfg);
  std::size_t skipped = 0;
  for (const TrialRow& r : t.rows) {
    if (r.skipped) {
      ++skipped;
      CHECK(r.censored);
    }
  }
  CHECK(skipped > 0);
  CHECK(sweep_csv(t).find("skipped") != std::string::npos);
  CHECK(summarize(t)[1].skipped == 8);
}

TEST_CASE("thread cap from the environment") {
  setenv("MEMBRANE_PERC_THREADS", "2", 1);
  CHECK(resolve_threads(8) == 2);
  CHECK(resolve_threads(1) == 1);
  setenv("MEMBRANE_PERC_THREADS", "junk", 1);
  CHECK(resolve_threads(3) == 3);
  unsetenv("MEMBRANE_PERC_THREADS");
  CHECK(resolve_threads(5) == 5);
}

TEST_CASE("other experiments") {
  SUBCASE("growth") {
    SweepConfig cfg;
    cfg.experiment = Experiment::Growth;
    cfg.lambdas = {3.0};
    cfg.window = 6.0;
    cfg.pad = 2.0;
    cfg.trials = 3;
    cfg.max_gen = 10;
    const ResultTable t = run_sweep(cfg);
    CHECK(t.rows.size() == 3);
    CHECK(sweep_csv(t).rfind(kSweepCsvHeader, 0) == 0);
  }
  SUBCASE("boxes") {
    SweepConfig cfg;
    cfg.experiment = Experiment::Boxes;
    cfg.lambdas = {4.0};
    cfg.trials = 2;
    const ResultTable t = run_sweep(cfg);
    const std::string csv = sweep_csv(t);
    CHECK(csv.rfind(kBoxSweepCsvHeader, 0) == 0);
    const auto s = summarize(t);
    CHECK(s[0].mean_open_fraction > 0.5);
    CHECK(s[0].mean_open_fraction <= 1.0);
  }
  SUBCASE("lattice") {
    SweepConfig cfg;
    cfg.experiment = Experiment::Lattice;
    cfg.lambdas = {0.0, 1.0};
    cfg.trials = 3;
    cfg.lattice_n = 6;
    const auto s = summarize(run_sweep(cfg));
    CHECK(s[0].feasible_fraction == 0.0);
    CHECK(s[1].feasible_fraction == 1.0);
  }
  SUBCASE("invalid") {
    SweepConfig cfg;
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    cfg.lambdas = {-1.0};
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    cfg.lambdas = {1.0};
    cfg.trials = 0;
    CHECK_THROWS_AS(run_sweep(cfg), Error);
    CHECK_THROWS_AS(parse_experiment("nope"), Error);
  }
}
