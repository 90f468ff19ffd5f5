#include "membrane/closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "json_io.hpp"
#include "membrane/error.hpp"
#include "membrane/union_find.hpp"

namespace membrane {

DefectSet initial_defects(const Scene& scene, int disk_resolution) {
  DefectSet d;
  d.defects.reserve(scene.holes.size());
  for (const Hole& h : scene.holes) {
    d.defects.push_back(hole_polygon(h, disk_resolution));
    d.provenance.push_back({h.id});
  }
  return d;
}

DefectSet initial_defects(std::span<const ConvexPolygon> holes) {
  DefectSet d;
  d.defects.assign(holes.begin(), holes.end());
  for (std::size_t i = 0; i < holes.size(); ++i) d.provenance.push_back({static_cast<int>(i)});
  return d;
}

std::vector<std::vector<std::size_t>> clusters(std::span<const ConvexPolygon> defects) {
  const std::size_t n = defects.size();
  UnionFind uf(n);
  // Sweep-and-prune on x-extents of the bounding boxes.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return defects[a].bbox().xmin < defects[b].bbox().xmin ||
           (defects[a].bbox().xmin == defects[b].bbox().xmin && a < b);
  });
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    const Bbox& bi = defects[i].bbox();
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::size_t j = order[oj];
      const Bbox& bj = defects[j].bbox();
      if (bj.xmin > bi.xmax + kGeomTolerance) break;
      if (!bi.overlaps(bj)) continue;
      if (uf.same(i, j)) continue;
      if (convex_intersects(defects[i], defects[j])) uf.unite(i, j);
    }
  }
  return uf.groups();
}

DefectSet next_generation(const DefectSet& current) {
  return next_generation(current, clusters(current.defects));
}

DefectSet next_generation(const DefectSet& current,
                          const std::vector<std::vector<std::size_t>>& partition) {
  DefectSet next;
  next.generation = current.generation + 1;
  next.defects.reserve(partition.size());
  for (const auto& cluster : partition) {
    std::vector<int> prov;
    if (cluster.size() == 1) {
      next.defects.push_back(current.defects[cluster[0]]);
      prov = current.provenance[cluster[0]];
    } else {
      std::vector<Point> pts;
      for (std::size_t idx : cluster) {
        const auto v = current.defects[idx].vertices();
        pts.insert(pts.end(), v.begin(), v.end());
        prov.insert(prov.end(), current.provenance[idx].begin(), current.provenance[idx].end());
      }
      next.defects.push_back(convex_hull(pts).widened());
      std::sort(prov.begin(), prov.end());
    }
    next.provenance.push_back(std::move(prov));
  }
  return next;
}

bool covers_window(const ConvexPolygon& defect, const Window& window) {
  return defect.contains(Point{window.xmin, window.ymin}) && defect.contains(Point{window.xmax, window.ymin}) &&
         defect.contains(Point{window.xmax, window.ymax}) && defect.contains(Point{window.xmin, window.ymax});
}

namespace {

// x-extent of a convex polygon on the horizontal line at height y.
bool scanline_interval(const ConvexPolygon& p, double y, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  const auto v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % v.size()];
    if ((a.y - y) * (b.y - y) > 0.0) continue;
    if (a.y == b.y) {
      lo = std::min({lo, a.x, b.x});
      hi = std::max({hi, a.x, b.x});
      continue;
    }
    const double t = (y - a.y) / (b.y - a.y);
    const double x = a.x + t * (b.x - a.x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return lo <= hi;
}

}  // namespace

double covered_area_fraction(std::span<const ConvexPolygon> defects, const Window& window, int scanlines) {
  if (scanlines < 1) throw Error(ErrorCode::InvalidArgument, "need at least one scanline");
  const double h = window.height() / scanlines;
  std::vector<std::vector<std::pair<double, double>>> rows(static_cast<std::size_t>(scanlines));
  for (const ConvexPolygon& p : defects) {
    const Bbox& b = p.bbox();
    if (b.xmax < window.xmin || b.xmin > window.xmax || b.ymax < window.ymin || b.ymin > window.ymax) continue;
    // Scanline s sits at y = ymin + (s + 1/2) h.
    const int s0 = std::max(0, static_cast<int>(std::ceil((b.ymin - window.ymin) / h - 0.5)));
    const int s1 = std::min(scanlines - 1, static_cast<int>(std::floor((b.ymax - window.ymin) / h - 0.5)));
    for (int s = s0; s <= s1; ++s) {
      const double y = window.ymin + (s + 0.5) * h;
      double lo = 0.0, hi = 0.0;
      if (!scanline_interval(p, y, lo, hi)) continue;
      lo = std::max(lo, window.xmin);
      hi = std::min(hi, window.xmax);
      if (hi > lo) rows[static_cast<std::size_t>(s)].push_back({lo, hi});
    }
  }
  double covered = 0.0;
  for (auto& row : rows) {
    if (row.empty()) continue;
    std::sort(row.begin(), row.end());
    double cur_lo = row[0].first, cur_hi = row[0].second;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k].first > cur_hi) {
        covered += cur_hi - cur_lo;
        cur_lo = row[k].first;
        cur_hi = row[k].second;
      } else {
        cur_hi = std::max(cur_hi, row[k].second);
      }
    }
    covered += cur_hi - cur_lo;
  }
  return covered * h / window.area();
}

ClosureResult closure_run(const Scene& scene, const Window& core, const ClosureOptions& options) {
  return closure_run(initial_defects(scene, options.disk_resolution), core, options);
}

ClosureResult closure_run(DefectSet initial, const Window& core, const ClosureOptions& options) {
  if (options.max_gen < 1) throw Error(ErrorCode::InvalidArgument, "max_gen must be at least 1");
  ClosureResult result;
  DefectSet current = std::move(initial);
  for (;;) {
    const int k = current.generation;
    result.report.generations.push_back(
        {k, current.defects.size(), covered_area_fraction(current.defects, core, options.area_scanlines)});
    if (options.keep_history) result.history.push_back(current);

    const bool covered = std::any_of(current.defects.begin(), current.defects.end(),
                                     [&](const ConvexPolygon& d) { return covers_window(d, core); });
    if (covered && !result.report.covering_generation) {
      result.report.covering_generation = k;
      if (options.stop_on_cover) break;
    }
    auto partition = clusters(current.defects);
    if (partition.size() == current.defects.size()) {
      result.report.fixed_point_generation = k;
      break;
    }
    if (k >= options.max_gen) break;
    current = next_generation(current, partition);
  }
  result.final_defects = std::move(current);
  return result;
}

std::string closure_report_csv_rows(const ClosureReport& report, std::uint64_t seed, double lambda) {
  std::ostringstream out;
  const std::string cover = report.covering_generation ? std::to_string(*report.covering_generation) : "";
  const std::string fixed = report.fixed_point_generation ? std::to_string(*report.fixed_point_generation) : "";
  for (const GenerationStats& g : report.generations) {
    out << seed << ',' << detail::format_double(lambda) << ',' << g.generation << ',' << g.defect_count << ','
        << detail::format_double(g.covered_area_fraction) << ',' << cover << ',' << fixed << '\n';
  }
  return out.str();
}

}  // namespace membrane
