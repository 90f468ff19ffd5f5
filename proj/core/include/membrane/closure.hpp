#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "membrane/geom.hpp"
#include "membrane/scene.hpp"

namespace membrane {

// Disks enter the closure as circumscribed polygons with this many sides.
inline constexpr int kDefaultDiskResolution = 64;

/// Defects of one generation. provenance[i] lists (sorted) the ids of the
/// generation-0 holes absorbed into defects[i].
struct DefectSet {
  int generation = 0;
  std::vector<ConvexPolygon> defects;
  std::vector<std::vector<int>> provenance;
};

DefectSet initial_defects(const Scene& scene, int disk_resolution = kDefaultDiskResolution);
DefectSet initial_defects(std::span<const ConvexPolygon> holes);

// Connected components of the contact graph of `defects`, ordered by
// smallest member index.
std::vector<std::vector<std::size_t>> clusters(std::span<const ConvexPolygon> defects);

// One defect per cluster: the convex hull of its members.
DefectSet next_generation(const DefectSet& current);
DefectSet next_generation(const DefectSet& current,
                          const std::vector<std::vector<std::size_t>>& partition);

// Corner containment; sufficient because the defect is convex.
bool covers_window(const ConvexPolygon& defect, const Window& window);

// Fraction of `window` covered by the union of `defects`, integrated by the
// midpoint rule over horizontal scanlines. Monotone under set inclusion for
// a fixed scanline count.
double covered_area_fraction(std::span<const ConvexPolygon> defects, const Window& window,
                             int scanlines = 1024);

struct GenerationStats {
  int generation = 0;
  std::size_t defect_count = 0;
  double covered_area_fraction = 0.0;
};

struct ClosureReport {
  std::vector<GenerationStats> generations;
  std::optional<int> covering_generation;     // first k with core window inside one defect
  std::optional<int> fixed_point_generation;  // first k whose clusters are all singletons
};

struct ClosureOptions {
  int max_gen = 60;
  int disk_resolution = kDefaultDiskResolution;
  int area_scanlines = 1024;
  bool stop_on_cover = true;
  bool keep_history = false;
};

struct ClosureResult {
  ClosureReport report;
  DefectSet final_defects;
  std::vector<DefectSet> history;  // every generation, when keep_history is set
};

/// Iterates next_generation until the core window is covered by a single
/// defect, a fixed point is reached, or max_gen generations have been built.
ClosureResult closure_run(const Scene& scene, const Window& core, const ClosureOptions& options = {});
ClosureResult closure_run(DefectSet initial, const Window& core, const ClosureOptions& options = {});

inline constexpr const char* kClosureCsvHeader =
    "seed,lambda,generation,defect_count,covered_area_fraction,covering_generation,fixed_point_generation";

// One row per generation, without the header line.
std::string closure_report_csv_rows(const ClosureReport& report, std::uint64_t seed, double lambda);

}  // namespace membrane
