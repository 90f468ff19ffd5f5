#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "membrane/growth.hpp"
#include "membrane/scene.hpp"

namespace membrane {

enum class Experiment { Closure, Growth, Boxes, Lattice };

Experiment parse_experiment(const std::string& text);
std::string to_string(Experiment e);

/// One Monte-Carlo sweep. For closure and growth runs `lambdas` are Poisson
/// rates on a square core window of side `window` with `pad` around it; for
/// box runs they are rates on the box grid of `boxes`; for lattice runs they
/// are edge probabilities on a `lattice_n` patch.
struct SweepConfig {
  Experiment experiment = Experiment::Closure;
  std::vector<double> lambdas;
  ShapeDistribution shape = FixedDisk{1.0};
  double window = 30.0;
  double pad = 7.5;
  int trials = 1;
  int max_gen = 60;
  std::uint64_t seed = 0;
  std::size_t max_holes = 200000;  // trials with more holes are skipped
  unsigned threads = 0;            // 0 means hardware concurrency
  bool record_runtime = false;     // runtime_ms is "NA" otherwise
  GrowthConfig growth;
  BoxConfig boxes;
  int lattice_n = 10;
};

void validate(const SweepConfig& cfg);

struct TrialRow {
  double lambda = 0.0;
  std::size_t lambda_index = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::optional<int> covering_generation;
  bool censored = false;
  bool skipped = false;  // hole cap exceeded; the trial did not run
  std::optional<int> fixed_point_generation;
  std::size_t holes = 0;
  std::optional<double> runtime_ms;
  std::vector<double> area_curve;  // closure: covered fraction per generation
  std::size_t boxes = 0;           // boxes: grid size
  std::size_t open_boxes = 0;      // boxes
  std::size_t largest_cluster = 0; // boxes
  bool feasible = false;           // lattice
  std::size_t edges = 0;           // lattice
};

struct ResultTable {
  Experiment experiment = Experiment::Closure;
  std::vector<TrialRow> rows;  // ordered by (lambda index, trial)
};

// Per-trial seed: mix_seed(master, lambda index, trial).
std::uint64_t trial_seed(std::uint64_t master, std::size_t lambda_index, int trial);

// Threads actually used: the request (or hardware concurrency when 0),
// capped by MEMBRANE_PERC_THREADS when that is set to a positive integer.
unsigned resolve_threads(unsigned requested);

TrialRow run_trial(const SweepConfig& cfg, std::size_t lambda_index, int trial);
ResultTable run_sweep(const SweepConfig& cfg);

inline constexpr const char* kSweepCsvHeader =
    "lambda,trial,seed,covering_generation,censored,fixed_point_generation,holes,runtime_ms";
inline constexpr const char* kBoxSweepCsvHeader = "lambda,trial,seed,open_boxes,largest_cluster,holes,runtime_ms";
inline constexpr const char* kLatticeSweepCsvHeader = "p,trial,seed,feasible,edges,runtime_ms";

// Header line plus one row per trial; the header depends on the experiment.
std::string sweep_csv(const ResultTable& table);

/// Nearest-rank quantile of a sorted sample: element ceil(q n) - 1.
int nearest_rank(const std::vector<int>& sorted, double q);

struct SweepSummary {
  double lambda = 0.0;
  std::size_t trials = 0;
  std::size_t uncensored = 0;
  std::size_t skipped = 0;
  double censored_fraction = 0.0;
  std::optional<int> median;  // empty when every trial is censored
  std::optional<int> p10;
  std::optional<int> p90;
  std::vector<double> mean_area_curve;  // closure only; finished runs hold their last value
  double mean_open_fraction = 0.0;      // boxes
  double feasible_fraction = 0.0;       // lattice
};

// One record per lambda, in lambda order. Throws Error(EmptyInput) on an
// empty table.
std::vector<SweepSummary> summarize(const ResultTable& table);

inline constexpr const char* kSummaryCsvHeader =
    "lambda,trials,uncensored,skipped,censored_fraction,median,p10,p90,mean_open_fraction,feasible_fraction";

// Censored quantiles are written as "censored".
std::string summary_csv(const std::vector<SweepSummary>& summary);
// "lambda,generation,mean_covered_area_fraction" rows with a header line.
std::string area_curve_csv(const std::vector<SweepSummary>& summary);

}  // namespace membrane
