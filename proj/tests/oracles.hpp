#pragma once

// Test-only reference implementations. These deliberately avoid the
// library code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "membrane/geom.hpp"

namespace oracle {

using membrane::Point;

inline double cross3(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// O(n^3) hull: (p, q) is a counterclockwise hull edge iff every other point
// is strictly left of it or lies on the closed segment.
inline std::set<std::pair<double, double>> brute_hull_vertices(const std::vector<Point>& pts) {
  std::set<std::pair<double, double>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) continue;
      bool edge = true;
      for (std::size_t k = 0; k < pts.size() && edge; ++k) {
        const double c = cross3(pts[i], pts[j], pts[k]);
        if (c < 0) edge = false;
        if (c == 0) {
          const double t = (pts[k].x - pts[i].x) * (pts[j].x - pts[i].x) +
                           (pts[k].y - pts[i].y) * (pts[j].y - pts[i].y);
          const double len2 = (pts[j].x - pts[i].x) * (pts[j].x - pts[i].x) +
                              (pts[j].y - pts[i].y) * (pts[j].y - pts[i].y);
          if (t < 0 || t > len2) edge = false;
        }
      }
      if (edge) {
        out.insert({pts[i].x, pts[i].y});
        out.insert({pts[j].x, pts[j].y});
      }
    }
  }
  return out;
}

inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = cross3(c, d, a), d2 = cross3(c, d, b);
  const double d3 = cross3(a, b, c), d4 = cross3(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_seg = [](Point p, Point q, Point r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && on_seg(c, d, a)) return true;
  if (d2 == 0 && on_seg(c, d, b)) return true;
  if (d3 == 0 && on_seg(a, b, c)) return true;
  if (d4 == 0 && on_seg(a, b, d)) return true;
  return false;
}

inline bool point_in_convex(const std::vector<Point>& poly, Point q) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (cross3(poly[i], poly[(i + 1) % poly.size()], q) < 0) return false;
  }
  return true;
}

// Closed convex polygons intersect iff an edge pair crosses or one polygon
// holds a vertex of the other.
inline bool polygons_intersect(const std::vector<Point>& p, const std::vector<Point>& q) {
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      if (segments_intersect(p[i], p[(i + 1) % p.size()], q[j], q[(j + 1) % q.size()])) return true;
  return point_in_convex(p, q[0]) || point_in_convex(q, p[0]);
}

inline std::vector<Point> to_vec(const membrane::ConvexPolygon& p) {
  return {p.vertices().begin(), p.vertices().end()};
}

// Random convex polygon: hull of a few points on a jittered circle.
inline membrane::ConvexPolygon random_convex(std::mt19937_64& rng, Point center, double radius,
                                              int max_vertices = 7) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_real_distribution<double> rad(0.4, 1.0);
  std::uniform_int_distribution<int> count(3, max_vertices);
  for (;;) {
    const int n = count(rng);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
      const double t = ang(rng);
      const double r = radius * rad(rng);
      pts.push_back({center.x + r * std::cos(t), center.y + r * std::sin(t)});
    }
    const auto h = membrane::convex_hull(pts);
    if (!h.degenerate && h.polygon().area() > 1e-3 * radius * radius) return h.polygon();
  }
}

}  // namespace oracle
