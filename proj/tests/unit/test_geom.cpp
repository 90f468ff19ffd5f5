#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "membrane/error.hpp"
#include "membrane/geom.hpp"
#include "oracles.hpp"

using namespace membrane;

namespace {

std::set<std::pair<double, double>> vertex_set(std::span<const Point> v) {
  std::set<std::pair<double, double>> s;
  for (const Point& p : v) s.insert({p.x, p.y});
  return s;
}

}  // namespace

TEST_CASE("orientation is exact on near-collinear input") {
  CHECK(orientation({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orientation({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orientation({0, 0}, {1, 1}, {2, 2}) == 0);
  // 0.1 + 0.2 != 0.3 in binary; the exact sign must reflect the stored values.
  const Point a{0.1, 0.1}, b{0.2, 0.2}, c{0.3, 0.3};
  CHECK(orientation(a, b, c) == 0);
  const Point d{0.5, std::nextafter(0.5, 1.0)};
  CHECK(orientation({0, 0}, {1, 1}, d) == 1);
}

TEST_CASE("convex_hull drops interior points") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}};
  const Hull h = convex_hull(pts);
  REQUIRE_FALSE(h.degenerate);
  CHECK(vertex_set(h.vertices) == vertex_set(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("convex_hull flags collinear input") {
  const std::vector<Point> seg{{0, 0}, {1, 1}};
  CHECK(convex_hull(seg).degenerate);
  const std::vector<Point> line{{0, 0}, {2, 2}, {1, 1}, {3, 3}};
  const Hull h = convex_hull(line);
  CHECK(h.degenerate);
  CHECK(h.vertices.size() == 2);
  const ConvexPolygon thin = h.widened();
  for (const Point& p : line) CHECK(thin.contains(p));
  CHECK(thin.area() < 1e-6);
}

TEST_CASE("convex_hull of empty input is an error") {
  const std::vector<Point> none;
  try {
    (void)convex_hull(none);
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("convex_hull of overlapping rectangles matches brute-force hull") {
  // Corners of [0,1]x[0,3] and [0,3]x[0,1].
  const std::vector<Point> corners{{0, 0}, {1, 0}, {1, 3}, {0, 3}, {0, 0}, {3, 0}, {3, 1}, {0, 1}};
  const auto expected = oracle::brute_hull_vertices(corners);
  CHECK(expected == vertex_set(std::vector<Point>{{0, 0}, {3, 0}, {3, 1}, {1, 3}, {0, 3}}));
  const Hull h = convex_hull(corners);
  CHECK(vertex_set(h.vertices) == expected);
  CHECK(h.polygon().area() == doctest::Approx(7.0));
}

TEST_CASE("convex_hull agrees with brute force on random clouds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> pts(3 + trial % 30);
    for (Point& p : pts) p = {u(rng), u(rng)};
    const Hull h = convex_hull(pts);
    CHECK(vertex_set(h.vertices) == oracle::brute_hull_vertices(pts));
  }
}

TEST_CASE("hull idempotence and monotonicity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> s(4 + trial % 20);
    for (Point& p : s) p = {u(rng), u(rng)};
    const Hull hs = convex_hull(s);
    if (hs.degenerate) continue;
    const Hull again = convex_hull(hs.vertices);
    CHECK(again.vertices == hs.vertices);

    std::vector<Point> t = s;
    for (int i = 0; i < 5; ++i) t.push_back({u(rng), u(rng)});
    const ConvexPolygon ht = convex_hull(t).polygon();
    CHECK(ht.contains(hs.polygon()));
  }
}

TEST_CASE("convex polygon rejects invalid vertex sequences") {
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), Error);
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), Error);         // clockwise
  CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), Error);  // collinear triple
  // Pentagram: every turn is left but it winds twice.
  std::vector<Point> star;
  for (int i = 0; i < 5; ++i) {
    const double t = 2.0 * std::numbers::pi * (2 * i) / 5.0;
    star.push_back({std::cos(t), std::sin(t)});
  }
  CHECK_THROWS_AS(ConvexPolygon{star}, Error);
}

TEST_CASE("convex_intersects on squares and disks") {
  const auto a = ConvexPolygon::rectangle(0, 1, 0, 1);
  CHECK(convex_intersects(a, ConvexPolygon::rectangle(1, 2, 0, 1)));
  CHECK_FALSE(convex_intersects(a, ConvexPolygon::rectangle(2, 3, 2, 3)));
  // Corner contact counts.
  CHECK(convex_intersects(a, ConvexPolygon::rectangle(1, 2, 1, 2)));

  const auto d0 = ConvexPolygon::circumscribed({0, 0}, 1.0, 32);
  const auto d1 = ConvexPolygon::circumscribed({1.9, 0}, 1.0, 32);
  CHECK(oracle::polygons_intersect(oracle::to_vec(d0), oracle::to_vec(d1)));
  CHECK(convex_intersects(d0, d1));
  CHECK(convex_distance(d0, d1) == 0.0);

  const auto far = ConvexPolygon::circumscribed({2.5, 0}, 1.0, 32);
  CHECK_FALSE(convex_intersects(d0, far));
  CHECK(convex_distance(d0, far) > 0.4);
}

TEST_CASE("convex_intersects is symmetric and matches the edge-crossing oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3, 3);
  int hits = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = oracle::random_convex(rng, {u(rng), u(rng)}, 1.5);
    const auto q = oracle::random_convex(rng, {u(rng), u(rng)}, 1.5);
    const bool pq = convex_intersects(p, q);
    CHECK(pq == convex_intersects(q, p));
    CHECK(pq == oracle::polygons_intersect(oracle::to_vec(p), oracle::to_vec(q)));
    hits += pq;
  }
  // Both outcomes must be exercised.
  CHECK(hits > 100);
  CHECK(hits < 900);
}

TEST_CASE("halfplane_intersection examples") {
  const auto box = ConvexPolygon::rectangle(-1, 1, -1, 1);
  const std::vector<HalfPlane> right{{{-1, 0}, 0}};  // x >= 0
  const auto half = halfplane_intersection(right, box);
  REQUIRE(half);
  CHECK(vertex_set(half->vertices()) ==
        vertex_set(ConvexPolygon::rectangle(0, 1, -1, 1).vertices()));

  const std::vector<HalfPlane> beyond{{{-1, 0}, -2}};  // x >= 2
  CHECK_FALSE(halfplane_intersection(beyond, ConvexPolygon::rectangle(0, 1, 0, 1)));

  const std::vector<HalfPlane> tri{{{1, 1}, 1}, {{-1, 0}, 0}, {{0, -1}, 0}};
  const auto t = halfplane_intersection(tri, ConvexPolygon::rectangle(-5, 5, -5, 5));
  REQUIRE(t);
  CHECK(vertex_set(t->vertices()) == vertex_set(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("halfplane_intersection output satisfies every constraint") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto window = ConvexPolygon::rectangle(-100, 100, -100, 100);
  int nonempty = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<HalfPlane> hs;
    for (int i = 0; i < 6; ++i) {
      Vec2 a{u(rng), u(rng)};
      if (norm(a) < 1e-3) a = {1, 0};
      hs.push_back({a, 50.0 * u(rng) + 20.0});
    }
    const auto cell = halfplane_intersection(hs, window);
    if (!cell) continue;
    ++nonempty;
    for (const Point& v : cell->vertices()) {
      CHECK(window.contains(v));
      for (const HalfPlane& h : hs) CHECK(h.contains(v, kGeomTolerance * 100));
    }
  }
  CHECK(nonempty > 50);
}

TEST_CASE("contains and area") {
  const auto sq = ConvexPolygon::rectangle(0, 1, 0, 1);
  CHECK(contains(sq, {0.5, 0.5}));
  CHECK(contains(sq, {1, 1}));
  CHECK_FALSE(contains(sq, {1.1, 0.5}));
  CHECK(area(ConvexPolygon({{0, 0}, {3, 0}, {0, 3}})) == doctest::Approx(4.5));
}

TEST_CASE("circumscribed polygon contains its disk") {
  const auto sq = ConvexPolygon::circumscribed({0, 0}, 1.0, 4);
  CHECK(sq.bbox().xmax == doctest::Approx(1.0));
  CHECK(sq.bbox().ymin == doctest::Approx(-1.0));
  const auto p64 = ConvexPolygon::circumscribed({3, -2}, 2.0, 64);
  CHECK(p64.contains_disk({3, -2}, 2.0));
  CHECK(p64.area() == doctest::Approx(64 * std::tan(std::numbers::pi / 64) * 4.0));
}

TEST_CASE("polygon intersection") {
  const auto r = intersection(ConvexPolygon::rectangle(0, 2, 0, 2), ConvexPolygon::rectangle(1, 3, 0, 2));
  REQUIRE(r);
  CHECK(r->area() == doctest::Approx(2.0));
  CHECK_FALSE(intersection(ConvexPolygon::rectangle(0, 1, 0, 1), ConvexPolygon::rectangle(1, 2, 0, 1)));
}
