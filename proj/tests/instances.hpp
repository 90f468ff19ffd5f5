#pragma once

// Random hole systems shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "membrane/geom.hpp"
#include "membrane/lifting.hpp"

namespace instances {

using membrane::ConvexPolygon;
using membrane::HoleSystem;
using membrane::Point;

inline ConvexPolygon random_convex(std::mt19937_64& rng, Point center, double rmin, double rmax, int vertices) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> rad(rmin, rmax);
  for (;;) {
    std::vector<double> t(static_cast<std::size_t>(vertices));
    for (double& a : t) a = ang(rng);
    std::sort(t.begin(), t.end());
    std::vector<Point> pts;
    for (double a : t) {
      const double r = rad(rng);
      pts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    const membrane::Hull h = membrane::convex_hull(pts);
    if (!h.degenerate && h.polygon().contains(center)) return h.polygon();
  }
}

// Holes with centers at least `spacing` apart in [0, side]^2.
inline HoleSystem separated_holes(std::mt19937_64& rng, int n, double side, double spacing) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::uniform_int_distribution<int> nv(3, 6);
  std::vector<Point> centers;
  while (static_cast<int>(centers.size()) < n) {
    const Point c{u(rng), u(rng)};
    bool ok = true;
    for (Point d : centers) ok = ok && std::hypot(c.x - d.x, c.y - d.y) >= spacing;
    if (ok) centers.push_back(c);
  }
  HoleSystem out;
  for (Point c : centers) out.push_back(random_convex(rng, c, 0.4, 0.45 * spacing, nv(rng)));
  return out;
}

inline ConvexPolygon rigid(const ConvexPolygon& p, double theta, Point shift) {
  std::vector<Point> pts;
  for (Point v : p.vertices()) {
    pts.push_back({std::cos(theta) * v.x - std::sin(theta) * v.y + shift.x,
                   std::sin(theta) * v.x + std::cos(theta) * v.y + shift.y});
  }
  return membrane::convex_hull(pts).polygon();
}

inline HoleSystem rigid(const HoleSystem& hs, double theta, Point shift) {
  HoleSystem out;
  for (const ConvexPolygon& p : hs) out.push_back(rigid(p, theta, shift));
  return out;
}

// Two to four triangles or quadrilaterals with at most 14 vertices, packed
// closely enough that overlaps and pinwheels occur; every fourth instance
// is a jittered pinwheel, sometimes with an extra triangle.
inline HoleSystem small_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (pick(rng) == 0) {
    HoleSystem base = membrane::pinwheel({0.0, 0.0}, 0.5 + u(rng));
    HoleSystem out;
    for (const ConvexPolygon& p : base) {
      std::vector<Point> pts;
      for (Point v : p.vertices()) pts.push_back({v.x + 0.1 * (u(rng) - 0.5), v.y + 0.1 * (u(rng) - 0.5)});
      out.push_back(membrane::convex_hull(pts).polygon());
    }
    if (u(rng) < 0.5) out.push_back(random_convex(rng, {8.0 * (u(rng) - 0.5), 8.0 * (u(rng) - 0.5)}, 0.3, 1.0, 3));
    return out;
  }
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_int_distribution<int> nv(3, 4);
  const int n = count(rng);
  HoleSystem out;
  int budget = 14;
  for (int i = 0; i < n; ++i) {
    const int v = std::min(nv(rng), budget - 3 * (n - 1 - i));
    out.push_back(random_convex(rng, {6.0 * u(rng), 6.0 * u(rng)}, 0.3, 2.0, v));
    budget -= static_cast<int>(out.back().size());
  }
  return out;
}

}  // namespace instances
