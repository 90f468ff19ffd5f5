#include "membrane/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "membrane/closure.hpp"
#include "membrane/error.hpp"
#include "membrane/rng.hpp"
#include "membrane/stress.hpp"

namespace membrane {

Experiment parse_experiment(const std::string& text) {
  if (text == "closure") return Experiment::Closure;
  if (text == "growth") return Experiment::Growth;
  if (text == "boxes") return Experiment::Boxes;
  if (text == "lattice") return Experiment::Lattice;
  throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + text + "'");
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Closure: return "closure";
    case Experiment::Growth: return "growth";
    case Experiment::Boxes: return "boxes";
    case Experiment::Lattice: return "lattice";
  }
  return "closure";
}

void validate(const SweepConfig& cfg) {
  if (cfg.lambdas.empty()) throw Error(ErrorCode::EmptyInput, "sweep needs at least one lambda");
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  for (double l : cfg.lambdas) {
    if (!std::isfinite(l)) throw Error(ErrorCode::InvalidRate, "lambda must be finite");
    if (cfg.experiment == Experiment::Lattice) {
      if (l < 0.0 || l > 1.0) throw Error(ErrorCode::InvalidArgument, "lattice p must lie in [0, 1]");
    } else if (!(l > 0.0)) {
      throw Error(ErrorCode::InvalidRate, "lambda must be positive");
    }
  }
  if (cfg.experiment == Experiment::Closure || cfg.experiment == Experiment::Growth) {
    if (!(cfg.window > 0.0) || !(cfg.pad >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "window must be positive and pad non-negative");
    }
    if (cfg.max_gen < 1) throw Error(ErrorCode::InvalidArgument, "max_gen must be at least 1");
  }
  if (cfg.experiment == Experiment::Boxes) {
    validate(cfg.boxes);
    if (cfg.boxes.nx < 2 || cfg.boxes.ny < 2) {
      throw Error(ErrorCode::InvalidArgument, "box grid must be at least 2x2");
    }
  }
  if (cfg.experiment == Experiment::Lattice && cfg.lattice_n < 2) {
    throw Error(ErrorCode::InvalidArgument, "lattice size must be at least 2");
  }
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t lambda_index, int trial) {
  return mix_seed(master, lambda_index, static_cast<std::uint64_t>(trial));
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MEMBRANE_PERC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

void closure_trial(const SweepConfig& cfg, TrialRow& row) {
  const Window core = square_window(cfg.window);
  const Scene scene = sample_poisson_scene(core, cfg.pad, row.lambda, cfg.shape, row.seed);
  row.holes = scene.holes.size();
  if (row.holes > cfg.max_holes) {
    row.skipped = true;
    row.censored = true;
    return;
  }
  ClosureOptions opts;
  opts.max_gen = cfg.max_gen;
  opts.area_scanlines = 256;
  const ClosureResult r = closure_run(scene, core, opts);
  row.covering_generation = r.report.covering_generation;
  row.fixed_point_generation = r.report.fixed_point_generation;
  row.censored = !row.covering_generation.has_value();
  for (const GenerationStats& g : r.report.generations) row.area_curve.push_back(g.covered_area_fraction);
}

void growth_trial(const SweepConfig& cfg, TrialRow& row) {
  const Window core = square_window(cfg.window);
  const Scene scene = sample_poisson_scene(core, cfg.pad, row.lambda, cfg.shape, row.seed);
  row.holes = scene.holes.size();
  if (row.holes > cfg.max_holes) {
    row.skipped = true;
    row.censored = true;
    return;
  }
  const int origin = nearest_disk(scene, core.center());
  row.censored = true;
  if (origin < 0) return;
  GrowthConfig gc = cfg.growth;
  gc.k_max = cfg.max_gen;
  const GrowthTrace trace = grow_run(scene, origin, gc);
  row.fixed_point_generation = trace.stopped_at;
  for (int k = trace.first_k; k <= trace.last_k(); ++k) {
    if (covers_window(trace.at(k), core)) {
      row.covering_generation = k;
      row.censored = false;
      break;
    }
  }
}

void box_trial(const SweepConfig& cfg, TrialRow& row) {
  const Scene scene =
      sample_poisson_scene(box_window(cfg.boxes), 0.3 * cfg.boxes.L(), row.lambda, FixedDisk{1.0}, row.seed);
  row.holes = scene.holes.size();
  if (row.holes > cfg.max_holes) {
    row.skipped = true;
    return;
  }
  const BoxGrid grid = box_grid_from(scene, cfg.boxes);
  row.boxes = grid.boxes.size();
  row.open_boxes = grid.open_count;
  row.largest_cluster = grid.largest_cluster;
}

void lattice_trial(const SweepConfig& cfg, TrialRow& row) {
  const Framework fw = triangular_lattice(cfg.lattice_n, row.lambda, row.seed);
  row.edges = fw.edges.size();
  row.feasible = spider_web_lp(fw).feasible;
}

}  // namespace

TrialRow run_trial(const SweepConfig& cfg, std::size_t lambda_index, int trial) {
  TrialRow row;
  row.lambda = cfg.lambdas.at(lambda_index);
  row.lambda_index = lambda_index;
  row.trial = trial;
  row.seed = trial_seed(cfg.seed, lambda_index, trial);
  const auto start = std::chrono::steady_clock::now();
  switch (cfg.experiment) {
    case Experiment::Closure: closure_trial(cfg, row); break;
    case Experiment::Growth: growth_trial(cfg, row); break;
    case Experiment::Boxes: box_trial(cfg, row); break;
    case Experiment::Lattice: lattice_trial(cfg, row); break;
  }
  if (cfg.record_runtime) {
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

ResultTable run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const std::size_t total = cfg.lambdas.size() * static_cast<std::size_t>(cfg.trials);
  ResultTable table;
  table.experiment = cfg.experiment;
  table.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        table.rows[k] = run_trial(cfg, k / static_cast<std::size_t>(cfg.trials), static_cast<int>(k % cfg.trials));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(resolve_threads(cfg.threads), total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "NA";
  if constexpr (std::is_same_v<T, double>) {
    return detail::format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string sweep_csv(const ResultTable& table) {
  using detail::format_double;
  std::ostringstream out;
  switch (table.experiment) {
    case Experiment::Closure:
    case Experiment::Growth:
      out << kSweepCsvHeader << "\n";
      for (const TrialRow& r : table.rows) {
        out << format_double(r.lambda) << "," << r.trial << "," << r.seed << "," << opt(r.covering_generation)
            << "," << (r.censored ? 1 : 0) << "," << (r.skipped ? "skipped" : opt(r.fixed_point_generation))
            << "," << r.holes << "," << opt(r.runtime_ms) << "\n";
      }
      break;
    case Experiment::Boxes:
      out << kBoxSweepCsvHeader << "\n";
      for (const TrialRow& r : table.rows) {
        out << format_double(r.lambda) << "," << r.trial << "," << r.seed << ","
            << (r.skipped ? std::string("NA") : std::to_string(r.open_boxes)) << ","
            << (r.skipped ? std::string("NA") : std::to_string(r.largest_cluster)) << "," << r.holes << ","
            << opt(r.runtime_ms) << "\n";
      }
      break;
    case Experiment::Lattice:
      out << kLatticeSweepCsvHeader << "\n";
      for (const TrialRow& r : table.rows) {
        out << format_double(r.lambda) << "," << r.trial << "," << r.seed << "," << (r.feasible ? 1 : 0) << ","
            << r.edges << "," << opt(r.runtime_ms) << "\n";
      }
      break;
  }
  return out.str();
}

int nearest_rank(const std::vector<int>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  const std::size_t rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q * n)));
  return sorted[std::min(rank, sorted.size()) - 1];
}

std::vector<SweepSummary> summarize(const ResultTable& table) {
  if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, "cannot summarize an empty table");
  std::vector<SweepSummary> out;
  std::size_t k = 0;
  while (k < table.rows.size()) {
    const std::size_t li = table.rows[k].lambda_index;
    std::size_t end = k;
    while (end < table.rows.size() && table.rows[end].lambda_index == li) ++end;

    SweepSummary s;
    s.lambda = table.rows[k].lambda;
    s.trials = end - k;
    std::vector<int> gens;
    std::size_t censored = 0;
    std::size_t curve_len = 0;
    std::size_t open_total = 0;
    std::size_t boxes_total = 0;
    std::size_t feasible = 0;
    for (std::size_t r = k; r < end; ++r) {
      const TrialRow& row = table.rows[r];
      if (row.skipped) ++s.skipped;
      if (row.censored || !row.covering_generation) {
        ++censored;
      } else {
        gens.push_back(*row.covering_generation);
      }
      curve_len = std::max(curve_len, row.area_curve.size());
      open_total += row.open_boxes;
      boxes_total += row.boxes;
      if (row.feasible) ++feasible;
    }
    s.uncensored = gens.size();
    s.censored_fraction = static_cast<double>(censored) / static_cast<double>(s.trials);
    if (!gens.empty()) {
      std::sort(gens.begin(), gens.end());
      s.median = nearest_rank(gens, 0.5);
      s.p10 = nearest_rank(gens, 0.1);
      s.p90 = nearest_rank(gens, 0.9);
    }
    if (curve_len > 0) {
      s.mean_area_curve.assign(curve_len, 0.0);
      for (std::size_t r = k; r < end; ++r) {
        const auto& c = table.rows[r].area_curve;
        for (std::size_t g = 0; g < curve_len; ++g) {
          const double v = c.empty() ? 0.0 : c[std::min(g, c.size() - 1)];
          s.mean_area_curve[g] += v / static_cast<double>(s.trials);
        }
      }
    }
    if (table.experiment == Experiment::Boxes && boxes_total > 0) {
      s.mean_open_fraction = static_cast<double>(open_total) / static_cast<double>(boxes_total);
    }
    s.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(s.trials);
    out.push_back(std::move(s));
    k = end;
  }
  return out;
}

std::string summary_csv(const std::vector<SweepSummary>& summary) {
  using detail::format_double;
  auto q = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("censored"); };
  std::ostringstream out;
  out << kSummaryCsvHeader << "\n";
  for (const SweepSummary& s : summary) {
    out << format_double(s.lambda) << "," << s.trials << "," << s.uncensored << "," << s.skipped << ","
        << format_double(s.censored_fraction) << "," << q(s.median) << "," << q(s.p10) << "," << q(s.p90) << ","
        << format_double(s.mean_open_fraction) << "," << format_double(s.feasible_fraction) << "\n";
  }
  return out.str();
}

std::string area_curve_csv(const std::vector<SweepSummary>& summary) {
  using detail::format_double;
  std::ostringstream out;
  out << "lambda,generation,mean_covered_area_fraction\n";
  for (const SweepSummary& s : summary) {
    for (std::size_t g = 0; g < s.mean_area_curve.size(); ++g) {
      out << format_double(s.lambda) << "," << g << "," << format_double(s.mean_area_curve[g]) << "\n";
    }
  }
  return out.str();
}

}  // namespace membrane
