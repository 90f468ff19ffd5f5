#include "membrane/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <gmpxx.h>

#include "membrane/error.hpp"

namespace membrane {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadOrigin: return "BadOrigin";
    case ErrorCode::DegenerateLifting: return "DegenerateLifting";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::MissingLayer: return "MissingLayer";
  }
  return "Unknown";
}

int orientation(Point a, Point b, Point c) {
  const double left = (b.x - a.x) * (c.y - a.y);
  const double right = (b.y - a.y) * (c.x - a.x);
  const double det = left - right;
  // Static filter (Shewchuk's ccwerrboundA); falls through to exact
  // rational evaluation only for near-collinear triples.
  constexpr double kErrBound = 3.3306690738754716e-16;
  const double bound = kErrBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;

  const mpq_class ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const mpq_class exact = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return sgn(exact);
}

double segment_distance(Point q, Point a, Point b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(q - a);
  const double t = std::clamp(dot(q - a, ab) / len2, 0.0, 1.0);
  return norm(q - (a + t * ab));
}

namespace {

Bbox bbox_of(std::span<const Point> v) {
  Bbox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& p : v) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "convex polygon needs at least 3 vertices");
  for (const Point& p : vertices_) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite polygon vertex");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (orientation(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n]) <= 0) {
      throw Error(ErrorCode::InvalidArgument, "polygon is not strictly convex and counterclockwise");
    }
  }
  // All left turns plus exactly two x-direction reversals rules out
  // self-overlapping star polygons.
  std::vector<int> signs;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = vertices_[(i + 1) % n].x - vertices_[i].x;
    if (dx != 0.0) signs.push_back(dx > 0 ? 1 : -1);
  }
  int reversals = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != signs[(i + 1) % signs.size()]) ++reversals;
  }
  if (reversals != 2) throw Error(ErrorCode::InvalidArgument, "polygon winds more than once");
  bbox_ = bbox_of(vertices_);
}

ConvexPolygon ConvexPolygon::rectangle(double xmin, double xmax, double ymin, double ymax) {
  return ConvexPolygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
}

ConvexPolygon ConvexPolygon::circumscribed(Point center, double radius, int m) {
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "circumscribed polygon needs m >= 3");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const double circum = radius / std::cos(std::numbers::pi / m);
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double theta = std::numbers::pi * (2.0 * i + 1.0) / m;
    v.push_back({center.x + circum * std::cos(theta), center.y + circum * std::sin(theta)});
  }
  return ConvexPolygon(std::move(v));
}

double ConvexPolygon::area() const {
  const std::size_t n = vertices_.size();
  const Point o = vertices_[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    twice += cross(vertices_[i] - o, vertices_[i + 1] - o);
  }
  return 0.5 * twice;
}

Point ConvexPolygon::centroid() const {
  const std::size_t n = vertices_.size();
  const Point o = vertices_[0];
  double twice = 0.0;
  Point acc{};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w = cross(vertices_[i] - o, vertices_[i + 1] - o);
    twice += w;
    acc = acc + w * (vertices_[i] + vertices_[i + 1] - 2.0 * o);
  }
  return o + (1.0 / (3.0 * twice)) * acc;
}

double ConvexPolygon::inner_distance(Point q) const {
  const std::size_t n = vertices_.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    const Vec2 e = b - a;
    best = std::min(best, cross(e, q - a) / norm(e));
  }
  return best;
}

bool ConvexPolygon::contains(Point q, double tol) const {
  if (q.x < bbox_.xmin - tol || q.x > bbox_.xmax + tol || q.y < bbox_.ymin - tol ||
      q.y > bbox_.ymax + tol) {
    return false;
  }
  return inner_distance(q) >= -tol;
}

bool ConvexPolygon::contains(const ConvexPolygon& inner, double tol) const {
  return std::all_of(inner.vertices_.begin(), inner.vertices_.end(),
                     [&](const Point& p) { return contains(p, tol); });
}

bool ConvexPolygon::contains_disk(Point center, double radius, double tol) const {
  return inner_distance(center) >= radius - tol;
}

ConvexPolygon ConvexPolygon::translated(Vec2 t) const {
  std::vector<Point> v(vertices_);
  for (Point& p : v) p = p + t;
  return ConvexPolygon(std::move(v));
}

Hull convex_hull(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "convex_hull of empty point set");
  for (const Point& p : points) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite point in convex_hull");
  }
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Hull out;
  if (pts.size() < 3) {
    out.vertices = pts;
    out.degenerate = true;
    return out;
  }

  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && orientation(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  out.degenerate = h.size() < 3;
  if (out.degenerate) {
    // All collinear: keep the two extreme points.
    out.vertices = {pts.front(), pts.back()};
  } else {
    out.vertices = std::move(h);
  }
  return out;
}

ConvexPolygon Hull::polygon() const {
  if (degenerate) throw Error(ErrorCode::InvalidArgument, "degenerate hull has no polygon");
  return ConvexPolygon(vertices);
}

ConvexPolygon Hull::widened(double half_thickness) const {
  if (!degenerate) return ConvexPolygon(vertices);
  const Point a = vertices.front();
  const Point b = vertices.back();
  Vec2 dir = b - a;
  double len = norm(dir);
  if (len == 0.0) {
    dir = {1.0, 0.0};
    len = 1.0;
  }
  const Vec2 u = (1.0 / len) * dir;
  const Vec2 n{-u.y, u.x};
  const double h = std::max(half_thickness, 1e-12 * std::max(1.0, norm(a)));
  // Thin rectangle around the segment [a, b].
  const Point p0 = a - h * u - h * n;
  const Point p1 = b + h * u - h * n;
  const Point p2 = b + h * u + h * n;
  const Point p3 = a - h * u + h * n;
  return ConvexPolygon({p0, p1, p2, p3});
}

namespace {

// Largest separation along the outward normals of p's edges, measured as
// min over q of the signed distance beyond each edge line.
double max_edge_gap(const ConvexPolygon& p, const ConvexPolygon& q) {
  const auto pv = p.vertices();
  const auto qv = q.vertices();
  const std::size_t n = pv.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = pv[i];
    const Vec2 e = pv[(i + 1) % n] - a;
    const Vec2 outward{e.y, -e.x};
    const double inv = 1.0 / norm(e);
    double min_q = std::numeric_limits<double>::infinity();
    for (const Point& w : qv) {
      min_q = std::min(min_q, dot(outward, w - a));
      if (min_q * inv <= best) break;
    }
    best = std::max(best, min_q * inv);
  }
  return best;
}

double vertex_edge_distance(const ConvexPolygon& p, const ConvexPolygon& q) {
  double best = std::numeric_limits<double>::infinity();
  const auto pv = p.vertices();
  const auto qv = q.vertices();
  for (const Point& w : pv) {
    for (std::size_t i = 0; i < qv.size(); ++i) {
      best = std::min(best, segment_distance(w, qv[i], qv[(i + 1) % qv.size()]));
    }
  }
  return best;
}

}  // namespace

double convex_distance(const ConvexPolygon& p, const ConvexPolygon& q) {
  const double gap = std::max(max_edge_gap(p, q), max_edge_gap(q, p));
  if (gap <= 0.0) return 0.0;
  return std::min(vertex_edge_distance(p, q), vertex_edge_distance(q, p));
}

bool convex_intersects(const ConvexPolygon& p, const ConvexPolygon& q, double tol) {
  if (!p.bbox().overlaps(q.bbox(), tol)) return false;
  const double gap_pq = max_edge_gap(p, q);
  if (gap_pq > tol) return false;
  const double gap_qp = max_edge_gap(q, p);
  if (gap_qp > tol) return false;
  if (std::max(gap_pq, gap_qp) <= 0.0) return true;
  return std::min(vertex_edge_distance(p, q), vertex_edge_distance(q, p)) <= tol;
}

std::optional<ConvexPolygon> halfplane_intersection(std::span<const HalfPlane> hs,
                                                    const ConvexPolygon& window) {
  std::vector<Point> poly(window.vertices().begin(), window.vertices().end());
  std::vector<Point> next;
  for (const HalfPlane& h : hs) {
    if (h.a.x == 0.0 && h.a.y == 0.0) {
      throw Error(ErrorCode::InvalidArgument, "half-plane normal must be non-zero");
    }
    next.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point cur = poly[i];
      const Point nxt = poly[(i + 1) % n];
      const double sc = dot(h.a, cur) - h.b;
      const double sn = dot(h.a, nxt) - h.b;
      if (sc <= 0.0) next.push_back(cur);
      if ((sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0)) {
        const double t = sc / (sc - sn);
        next.push_back(cur + t * (nxt - cur));
      }
    }
    poly.swap(next);
    if (poly.size() < 3) return std::nullopt;
  }
  const Hull hull = convex_hull(poly);
  if (hull.degenerate) return std::nullopt;
  ConvexPolygon out(hull.vertices);
  // Slivers thinner than the contact tolerance count as empty.
  const Bbox& b = out.bbox();
  if (out.area() <= kGeomTolerance * std::max(b.width(), b.height())) return std::nullopt;
  return out;
}

std::optional<ConvexPolygon> intersection(const ConvexPolygon& p, const ConvexPolygon& q) {
  if (!p.bbox().overlaps(q.bbox(), 0.0)) return std::nullopt;
  const auto qv = q.vertices();
  std::vector<HalfPlane> hs;
  hs.reserve(qv.size());
  for (std::size_t i = 0; i < qv.size(); ++i) {
    const Point a = qv[i];
    const Vec2 e = qv[(i + 1) % qv.size()] - a;
    const Vec2 outward{e.y, -e.x};
    hs.push_back({outward, dot(outward, a)});
  }
  return halfplane_intersection(hs, p);
}

}  // namespace membrane
