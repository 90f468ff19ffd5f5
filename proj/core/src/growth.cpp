#include "membrane/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "membrane/error.hpp"
#include "membrane/rng.hpp"
#include "membrane/union_find.hpp"

namespace membrane {

GrowthVariant parse_growth_variant(const std::string& text) {
  if (text == "full") return GrowthVariant::Full;
  if (text == "ring") return GrowthVariant::Ring;
  if (text == "restricted") return GrowthVariant::Restricted;
  throw Error(ErrorCode::InvalidArgument, "unknown growth variant '" + text + "'");
}

PointColor parse_point_color(const std::string& text) {
  if (text == "any") return PointColor::Any;
  if (text == "green") return PointColor::Green;
  if (text == "blue") return PointColor::Blue;
  throw Error(ErrorCode::InvalidArgument, "unknown color '" + text + "'");
}

std::string to_string(GrowthVariant v) {
  switch (v) {
    case GrowthVariant::Full: return "full";
    case GrowthVariant::Ring: return "ring";
    case GrowthVariant::Restricted: return "restricted";
  }
  return "?";
}

std::string to_string(PointColor c) {
  switch (c) {
    case PointColor::Any: return "any";
    case PointColor::Green: return "green";
    case PointColor::Blue: return "blue";
  }
  return "?";
}

PointColor checkerboard_color(Point p) {
  const auto s = static_cast<long long>(std::floor(4.0 * p.x)) + static_cast<long long>(std::floor(4.0 * p.y));
  return (s % 2 == 0) ? PointColor::Green : PointColor::Blue;
}

const ConvexPolygon& GrowthTrace::at(int k) const {
  if (k < first_k || polygons.empty()) throw Error(ErrorCode::InvalidArgument, "generation before trace start");
  const auto idx = std::min(static_cast<std::size_t>(k - first_k), polygons.size() - 1);
  return polygons[idx];
}

bool GrowthTrace::covers_through(int k) const {
  for (int g = first_k; g <= k; ++g) {
    const auto idx = static_cast<std::size_t>(g - first_k);
    const bool ok = idx < contains_next_circle.size() ? contains_next_circle[idx]
                                                      : at(g).contains_disk(origin, g + 1.0);
    if (!ok) return false;
  }
  return true;
}

namespace {

struct Candidate {
  std::size_t hole;
  double rho;
  double phi;
  double reach;  // circumradius of the hole polygon
};

double max_radius(const ConvexPolygon& p, Point origin) {
  double r = 0.0;
  for (const Point& v : p.vertices()) r = std::max(r, norm(v - origin));
  return r;
}

}  // namespace

GrowthTrace grow_from(const Scene& scene, Point origin, const ConvexPolygon& seed, int first_k,
                      const GrowthConfig& config, std::span<const int> exclude) {
  const bool ring = config.variant != GrowthVariant::Full;
  const bool angular = config.angular_exclusion || config.variant == GrowthVariant::Restricted;
  PointColor color = config.color;
  if (config.variant == GrowthVariant::Restricted && color == PointColor::Any) color = PointColor::Green;
  const double polygon_factor = 1.0 / std::cos(std::numbers::pi / config.disk_resolution);

  std::vector<Candidate> cands;
  cands.reserve(scene.holes.size());
  const double ring_limit = config.k_max + 2.0 + kGeomTolerance;
  for (std::size_t h = 0; h < scene.holes.size(); ++h) {
    const Hole& hole = scene.holes[h];
    if (std::find(exclude.begin(), exclude.end(), hole.id) != exclude.end()) continue;
    if (color != PointColor::Any && checkerboard_color(hole.center) != color) continue;
    const Vec2 rel = hole.center - origin;
    const double rho = norm(rel);
    if (ring && rho > ring_limit) continue;
    const double reach = circumradius(hole.shape) * (hole.is_disk() ? polygon_factor : 1.0);
    cands.push_back({h, rho, std::atan2(rel.y, rel.x), reach});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.rho < b.rho || (a.rho == b.rho && a.hole < b.hole);
  });
  double max_reach = 0.0;
  for (const Candidate& c : cands) max_reach = std::max(max_reach, c.reach);

  std::vector<char> absorbed(cands.size(), 0);
  std::vector<std::optional<ConvexPolygon>> cache(cands.size());
  auto polygon_of = [&](std::size_t ci) -> const ConvexPolygon& {
    if (!cache[ci]) cache[ci] = hole_polygon(scene.holes[cands[ci].hole], config.disk_resolution);
    return *cache[ci];
  };

  GrowthTrace trace;
  trace.origin = origin;
  trace.first_k = first_k;
  trace.polygons.push_back(seed);
  trace.contains_next_circle.push_back(seed.contains_disk(origin, first_k + 1.0));

  ConvexPolygon g = seed;
  double g_radius = max_radius(g, origin);
  for (int k = first_k; k < config.k_max; ++k) {
    double lo = 0.0, hi = g_radius + max_reach + kGeomTolerance;
    if (ring) {
      lo = k + 1.5;
      hi = std::min(hi, k + 2.0);
    }
    const auto begin = std::lower_bound(cands.begin(), cands.end(), lo,
                                        [](const Candidate& c, double v) { return c.rho < v; });
    const double exclusion = (angular && k >= 1) ? std::pow(static_cast<double>(k), -2.0 / 3.0) : -1.0;

    std::vector<std::size_t> fresh;
    for (auto it = begin; it != cands.end() && it->rho <= hi; ++it) {
      const auto ci = static_cast<std::size_t>(it - cands.begin());
      if (absorbed[ci]) continue;
      if (it->rho - it->reach > g_radius + kGeomTolerance) continue;
      if (exclusion >= 0.0) {
        const double a = std::abs(it->phi);
        if (a <= exclusion || std::numbers::pi - a <= exclusion) continue;
      }
      // Center depth decides most candidates without the full polygon test.
      const double depth = g.inner_distance(scene.holes[cands[ci].hole].center);
      if (depth >= 0.0) {
        fresh.push_back(ci);
        continue;
      }
      if (-depth > it->reach + 1e-6) continue;
      const ConvexPolygon& p = polygon_of(ci);
      if (!g.bbox().overlaps(p.bbox())) continue;
      if (convex_intersects(g, p)) fresh.push_back(ci);
    }
    if (fresh.empty()) {
      trace.stopped_at = k;
      break;
    }
    std::vector<Point> pts(g.vertices().begin(), g.vertices().end());
    // Points well inside the inscribed disk of G about the origin cannot be hull vertices.
    const double inner = g.inner_distance(origin) - 1e-6;
    for (std::size_t ci : fresh) {
      absorbed[ci] = 1;
      trace.used_holes.push_back(scene.holes[cands[ci].hole].id);
      for (const Point& v : polygon_of(ci).vertices())
        if (norm(v - origin) >= inner) pts.push_back(v);
    }
    g = convex_hull(pts).widened();
    g_radius = max_radius(g, origin);
    trace.polygons.push_back(g);
    trace.contains_next_circle.push_back(g.contains_disk(origin, k + 2.0));
    trace.added.push_back(fresh.size());
  }
  return trace;
}

int nearest_disk(const Scene& scene, Point p) {
  int best_id = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const Hole& h : scene.holes) {
    const double d = norm(h.center - p);
    if (h.is_disk() && d < best) {
      best = d;
      best_id = h.id;
    }
  }
  return best_id;
}

GrowthTrace grow_run(const Scene& scene, int origin_id, const GrowthConfig& config) {
  const auto it = std::find_if(scene.holes.begin(), scene.holes.end(), [&](const Hole& h) { return h.id == origin_id; });
  if (it == scene.holes.end()) throw Error(ErrorCode::BadOrigin, "no hole with id " + std::to_string(origin_id));
  if (!it->is_disk()) throw Error(ErrorCode::BadOrigin, "origin hole " + std::to_string(origin_id) + " is not a disk");
  const int self[] = {origin_id};
  return grow_from(scene, it->center, hole_polygon(*it, config.disk_resolution), 0, config, self);
}

std::string growth_trace_csv(const GrowthTrace& trace) {
  std::ostringstream out;
  out << "k,vertex_count,area,contains_next_circle\n";
  for (std::size_t i = 0; i < trace.polygons.size(); ++i) {
    out << trace.first_k + static_cast<int>(i) << ',' << trace.polygons[i].size() << ','
        << detail::format_double(trace.polygons[i].area()) << ',' << (trace.contains_next_circle[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

int ring_sector_count(int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "ring index must be nonnegative");
  return static_cast<int>(std::ceil(2.0 * std::numbers::pi * std::sqrt(k + 3.0)));
}

double ring_sector_angle(int k) { return 2.0 * std::numbers::pi / ring_sector_count(k); }

double ring_event_probability(double lambda, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidRate, "lambda must be positive");
  const int m = ring_sector_count(k);
  const double alpha = 2.0 * std::numbers::pi / m;
  return std::pow(-std::expm1(-lambda * alpha * (k + 1.75) / 2.0), m);
}

bool ring_sectors_occupied(std::span<const Point> centers, Point origin, int k) {
  const int m = ring_sector_count(k);
  const double alpha = 2.0 * std::numbers::pi / m;
  std::vector<char> hit(static_cast<std::size_t>(m), 0);
  int remaining = m;
  for (const Point& c : centers) {
    const Vec2 rel = c - origin;
    const double rho = norm(rel);
    if (rho < k + 1.5 || rho > k + 2.0) continue;
    double phi = std::atan2(rel.y, rel.x);
    if (phi <= 0.0) phi += 2.0 * std::numbers::pi;
    int i = static_cast<int>(std::ceil(phi / alpha)) - 1;
    i = std::clamp(i, 0, m - 1);
    if (!hit[static_cast<std::size_t>(i)]) {
      hit[static_cast<std::size_t>(i)] = 1;
      if (--remaining == 0) return true;
    }
  }
  return false;
}

double ring_lemma_min_radius(Point b, Point c) { return segment_distance(Point{0.0, 0.0}, b, c); }

bool disk_covered(Point center, double radius, const Scene& scene, int samples) {
  return disk_covered(center, radius, std::span<const Hole>(scene.holes), samples);
}

bool disk_covered(Point center, double radius, std::span<const Hole> holes, int samples) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  constexpr double margin = 1e-6;
  std::vector<const Hole*> local;
  for (const Hole& h : holes) {
    if (norm(h.center - center) <= radius) local.push_back(&h);
  }
  if (local.empty()) return false;
  auto covered = [&](Point q) {
    for (const Hole* h : local) {
      if (hole_contains(*h, q, margin)) return true;
    }
    return false;
  };
  const int boundary = std::max(16, samples / 8);
  for (int i = 0; i < boundary; ++i) {
    const double t = 2.0 * std::numbers::pi * i / boundary;
    if (!covered({center.x + radius * std::cos(t), center.y + radius * std::sin(t)})) return false;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const int interior = std::max(1, samples - boundary);
  for (int i = 0; i < interior; ++i) {
    const double r = radius * std::sqrt((i + 0.5) / interior);
    const double t = golden * i;
    if (!covered({center.x + r * std::cos(t), center.y + r * std::sin(t)})) return false;
  }
  return true;
}

double BoxConfig::L() const { return 5.0 * T * static_cast<double>(k0) * k0 * k0; }
int BoxConfig::k1() const { return static_cast<int>(std::ceil(0.6 * L())); }

void validate(const BoxConfig& config) {
  if (config.k0 <= 1) throw Error(ErrorCode::InvalidArgument, "k0 must exceed 1");
  if (config.T < 0) throw Error(ErrorCode::InvalidArgument, "T must be nonnegative");
  if (config.nx < 1 || config.ny < 1) throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");
  if (config.disk_samples < 1) throw Error(ErrorCode::InvalidArgument, "disk_samples must be positive");
}

std::vector<Point> box_candidates(const BoxConfig& config, int i, int j) {
  validate(config);
  const double L = config.L();
  const double step = static_cast<double>(config.k0) * config.k0 * config.k0;
  std::vector<Point> out;
  for (int t = 0; t <= config.T; ++t) out.push_back({(i + 0.4) * L + t * step, (j + 0.5) * L});
  return out;
}

PointColor box_color(int i, int j) { return ((i + j) % 2 == 0) ? PointColor::Green : PointColor::Blue; }

BoxOutcome box_evaluate(const Scene& scene, const BoxConfig& config, int i, int j) {
  validate(config);
  BoxOutcome out;
  out.color = box_color(i, j);
  const auto candidates = box_candidates(config, i, j);
  const double L = config.L();
  const int k1 = config.k1();
  // Degenerate boxes (T = 0 gives L = 0) have no room to grow.
  if (k1 <= config.k0) return out;

  const Point corners[] = {{i * L, j * L}, {(i + 1) * L, j * L}, {(i + 1) * L, (j + 1) * L}, {i * L, (j + 1) * L}};
  std::set<int> consumed;
  GrowthConfig growth;
  growth.variant = GrowthVariant::Restricted;
  growth.color = out.color;
  growth.k_max = k1 - 1;

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Point a = candidates[c];
    std::vector<Hole> inside;
    for (const Hole& h : scene.holes) {
      if (norm(h.center - a) <= config.k0) {
        inside.push_back(h);
        consumed.insert(h.id);
      }
    }
    if (!disk_covered(a, config.k0, inside, config.disk_samples)) continue;
    const ConvexPolygon seed = ConvexPolygon::circumscribed(a, config.k0, growth.disk_resolution);
    const GrowthTrace trace = grow_from(scene, a, seed, config.k0 - 1, growth);
    consumed.insert(trace.used_holes.begin(), trace.used_holes.end());
    double nearest_corner = std::numeric_limits<double>::infinity();
    for (const Point& q : corners) nearest_corner = std::min(nearest_corner, norm(q - a));
    if (max_radius(trace.polygons.back(), a) >= nearest_corner) out.corner_clear = false;
    if (trace.at(k1 - 1).contains_disk(a, k1)) {
      out.open = true;
      out.candidate_index = static_cast<int>(c);
      break;
    }
  }
  out.consumed.assign(consumed.begin(), consumed.end());
  return out;
}

bool box_open(const Scene& scene, const BoxConfig& config, int i, int j) {
  return box_evaluate(scene, config, i, j).open;
}

Window box_window(const BoxConfig& config) {
  const double L = config.L();
  return {0.0, config.nx * L, 0.0, config.ny * L};
}

BoxGrid box_grid_from(const Scene& scene, const BoxConfig& config) {
  validate(config);
  BoxGrid grid;
  grid.nx = config.nx;
  grid.ny = config.ny;
  for (int j = 0; j < config.ny; ++j)
    for (int i = 0; i < config.nx; ++i) grid.boxes.push_back(box_evaluate(scene, config, i, j));
  update_cluster_stats(grid);
  return grid;
}

BoxGrid box_coupling_run(double lambda, const BoxConfig& config, std::uint64_t seed) {
  validate(config);
  if (config.nx < 2 || config.ny < 2) throw Error(ErrorCode::InvalidArgument, "box grid must be at least 2x2");
  const Scene scene = sample_poisson_scene(box_window(config), 0.3 * config.L(), lambda, FixedDisk{1.0}, seed);
  return box_grid_from(scene, config);
}

void update_cluster_stats(BoxGrid& grid) {
  SiteGrid sites;
  sites.nx = grid.nx;
  sites.ny = grid.ny;
  for (const BoxOutcome& b : grid.boxes) sites.open.push_back(b.open ? 1 : 0);
  grid.open_count = static_cast<std::size_t>(std::count(sites.open.begin(), sites.open.end(), 1));
  grid.largest_cluster = largest_cluster_sites(sites).size();
}

std::string box_grid_csv(const BoxGrid& grid) {
  std::ostringstream out;
  out << "i,j,open,candidate_index\n";
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const BoxOutcome& b = grid.at(i, j);
      out << i << ',' << j << ',' << (b.open ? 1 : 0) << ',' << b.candidate_index << '\n';
    }
  return out.str();
}

SiteGrid sample_site_grid(int nx, int ny, double p, std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SiteGrid g;
  g.nx = nx;
  g.ny = ny;
  g.open.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (char& c : g.open) c = u(rng) < p ? 1 : 0;
  return g;
}

std::vector<int> site_cluster_labels(const SiteGrid& grid, int* count) {
  const std::size_t n = grid.open.size();
  UnionFind uf(n);
  for (int y = 0; y < grid.ny; ++y)
    for (int x = 0; x < grid.nx; ++x) {
      if (!grid.is_open(x, y)) continue;
      const auto idx = static_cast<std::size_t>(y * grid.nx + x);
      if (x + 1 < grid.nx && grid.is_open(x + 1, y)) uf.unite(idx, idx + 1);
      if (y + 1 < grid.ny && grid.is_open(x, y + 1)) uf.unite(idx, idx + static_cast<std::size_t>(grid.nx));
    }
  std::vector<int> labels(n, -1);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!grid.open[i]) continue;
    const std::size_t r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  if (count) *count = next;
  return labels;
}

bool has_vertical_crossing(const SiteGrid& grid) {
  int count = 0;
  const auto labels = site_cluster_labels(grid, &count);
  std::vector<char> bottom(static_cast<std::size_t>(count), 0);
  for (int x = 0; x < grid.nx; ++x) {
    const int l = labels[static_cast<std::size_t>(x)];
    if (l >= 0) bottom[static_cast<std::size_t>(l)] = 1;
  }
  const auto top = static_cast<std::size_t>((grid.ny - 1) * grid.nx);
  for (int x = 0; x < grid.nx; ++x) {
    const int l = labels[top + static_cast<std::size_t>(x)];
    if (l >= 0 && bottom[static_cast<std::size_t>(l)]) return true;
  }
  return false;
}

std::vector<Point> largest_cluster_sites(const SiteGrid& grid) {
  int count = 0;
  const auto labels = site_cluster_labels(grid, &count);
  if (count == 0) return {};
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
  for (int l : labels)
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Point> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == best) {
      out.push_back({static_cast<double>(i % static_cast<std::size_t>(grid.nx)),
                     static_cast<double>(i / static_cast<std::size_t>(grid.nx))});
    }
  }
  return out;
}

int cone_index(Point p, Point apex) {
  const double dx = p.x - apex.x;
  const double dy = p.y - apex.y;
  if (dx == 0.0 && dy == 0.0) return -1;
  if (dx > 0.0 && dy >= 0.0) return dy <= dx ? 0 : 1;   // [0, pi/2)
  if (dx <= 0.0 && dy > 0.0) return dx == 0.0 ? 1 : (dy >= -dx ? 2 : 3);  // [pi/2, pi)
  if (dx < 0.0 && dy <= 0.0) return dy == 0.0 ? 3 : (-dy <= -dx ? 4 : 5);  // [pi, 3pi/2)
  return (dx == 0.0) ? 5 : (-dy >= dx ? 6 : 7);  // dx >= 0, dy < 0
}

std::array<bool, 8> cone_occupancy(std::span<const Point> points, Point apex) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "cone_occupancy needs at least one point");
  std::array<bool, 8> out{};
  for (const Point& p : points) {
    const int c = cone_index(p, apex);
    if (c >= 0) out[static_cast<std::size_t>(c)] = true;
  }
  return out;
}

}  // namespace membrane
