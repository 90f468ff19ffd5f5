#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "membrane/closure.hpp"
#include "membrane/geom.hpp"
#include "membrane/scene.hpp"

namespace membrane {

enum class GrowthVariant { Full, Ring, Restricted };
enum class PointColor { Any, Green, Blue };

GrowthVariant parse_growth_variant(const std::string& text);
PointColor parse_point_color(const std::string& text);
std::string to_string(GrowthVariant v);
std::string to_string(PointColor c);

// Checkerboard with cells of side 1/4: green when floor(4x)+floor(4y) is even.
PointColor checkerboard_color(Point p);

/// Admissibility rules for the disks added at each growth step.
/// Restricted means ring semantics with angular exclusion and a color filter
/// (green when `color` is Any).
struct GrowthConfig {
  GrowthVariant variant = GrowthVariant::Full;
  PointColor color = PointColor::Any;
  bool angular_exclusion = false;
  int k_max = 50;
  int disk_resolution = kDefaultDiskResolution;
};

struct GrowthTrace {
  Point origin;
  int first_k = 0;                        // generation index of polygons[0]
  std::vector<ConvexPolygon> polygons;    // G(first_k), G(first_k + 1), ...
  std::vector<bool> contains_next_circle; // G(k) contains the disk of radius k+1 about origin
  std::vector<std::size_t> added;         // disks absorbed at each step
  std::optional<int> stopped_at;          // first k at which no admissible disk touched G(k)
  std::vector<int> used_holes;            // ids of absorbed holes, in absorption order

  int last_k() const { return first_k + static_cast<int>(polygons.size()) - 1; }
  // G(k) for any k >= first_k; the trace is constant past its end.
  const ConvexPolygon& at(int k) const;
  // True when every flag up to and including k holds.
  bool covers_through(int k) const;
};

/// Grows from the hole with id `origin_id`, which must be a disk.
/// Throws Error(BadOrigin) otherwise.
GrowthTrace grow_run(const Scene& scene, int origin_id, const GrowthConfig& config);

// Id of the disk hole whose center is closest to `p`, or -1 without disks.
int nearest_disk(const Scene& scene, Point p);

// Same process started from an arbitrary convex seed taken as G(first_k).
// Holes listed in `exclude` are never absorbed.
GrowthTrace grow_from(const Scene& scene, Point origin, const ConvexPolygon& seed, int first_k,
                      const GrowthConfig& config, std::span<const int> exclude = {});

// "k,vertex_count,area,contains_next_circle" rows with a header line.
std::string growth_trace_csv(const GrowthTrace& trace);

// Number of congruent sectors of the ring at step k: ceil(2 pi sqrt(k+3)).
int ring_sector_count(int k);
// Angular width 2 pi / ring_sector_count(k).
double ring_sector_angle(int k);
// (1 - exp(-lambda alpha (k + 7/4) / 2))^M with the integer sector count.
double ring_event_probability(double lambda, int k);
// Whether every sector of the ring k+3/2 <= rho <= k+2 about `origin`
// holds at least one of `centers`. Sector i covers angles (i alpha, (i+1) alpha].
bool ring_sectors_occupied(std::span<const Point> centers, Point origin, int k);
// Distance from the origin to segment [b, c].
double ring_lemma_min_radius(Point b, Point c);

/// Whether the disk of radius `radius` about `center` is covered by scene
/// holes whose centers lie in that disk. Tests `samples` points of a
/// sunflower pattern plus boundary points, each needing a 1e-6 inward margin.
bool disk_covered(Point center, double radius, const Scene& scene, int samples = 4096);
bool disk_covered(Point center, double radius, std::span<const Hole> holes, int samples = 4096);

struct BoxConfig {
  int k0 = 2;
  int T = 1;
  int nx = 2;
  int ny = 2;
  int disk_samples = 4096;

  double L() const;  // 5 T k0^3
  int k1() const;    // ceil(0.6 L)
};

void validate(const BoxConfig& config);

// Centers of the T+1 candidate circles of box (i, j).
std::vector<Point> box_candidates(const BoxConfig& config, int i, int j);
// Green for even i+j, blue otherwise.
PointColor box_color(int i, int j);

struct BoxOutcome {
  bool open = false;
  int candidate_index = -1;       // first candidate meeting both conditions
  PointColor color = PointColor::Green;
  bool corner_clear = true;       // no grown polygon reached a box corner
  std::vector<int> consumed;      // sorted ids of holes the box looked at
};

BoxOutcome box_evaluate(const Scene& scene, const BoxConfig& config, int i, int j);
bool box_open(const Scene& scene, const BoxConfig& config, int i, int j);

struct BoxGrid {
  int nx = 0;
  int ny = 0;
  std::vector<BoxOutcome> boxes;  // row-major, index j * nx + i
  std::size_t largest_cluster = 0;
  std::size_t open_count = 0;

  const BoxOutcome& at(int i, int j) const { return boxes[static_cast<std::size_t>(j * nx + i)]; }
};

// Scene window for a box grid: [0, nx L] x [0, ny L] with pad 0.3 L.
Window box_window(const BoxConfig& config);
BoxGrid box_coupling_run(double lambda, const BoxConfig& config, std::uint64_t seed);
BoxGrid box_grid_from(const Scene& scene, const BoxConfig& config);
// Fills cluster statistics of a grid whose open flags are already set.
void update_cluster_stats(BoxGrid& grid);
// "i,j,open,candidate_index" rows with a header line.
std::string box_grid_csv(const BoxGrid& grid);

/// Site percolation on an nx x ny patch of Z^2, row-major.
struct SiteGrid {
  int nx = 0;
  int ny = 0;
  std::vector<char> open;

  bool is_open(int x, int y) const { return open[static_cast<std::size_t>(y * nx + x)] != 0; }
};

SiteGrid sample_site_grid(int nx, int ny, double p, std::uint64_t seed);
// Component label per site (-1 when closed); 4-neighbor adjacency.
std::vector<int> site_cluster_labels(const SiteGrid& grid, int* count = nullptr);
// True when one open cluster meets both the bottom and top rows.
bool has_vertical_crossing(const SiteGrid& grid);
// Sites of a largest open cluster (smallest label on ties).
std::vector<Point> largest_cluster_sites(const SiteGrid& grid);

/// For each of the 8 cones {angle in [i pi/4, (i+1) pi/4]} about `apex`,
/// whether some point lies in it. Boundary rays belong to the lower index
/// (the ray at angle 0 belongs to cone 0); the apex itself counts for none.
std::array<bool, 8> cone_occupancy(std::span<const Point> points, Point apex);
// Cone index of `p` relative to `apex`, or -1 when they coincide.
int cone_index(Point p, Point apex);

}  // namespace membrane
