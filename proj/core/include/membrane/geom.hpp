#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace membrane {

/// Absolute tolerance for containment and contact tests. Window coordinates
/// are O(10^2), so this sits well above accumulated rounding.
inline constexpr double kGeomTolerance = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

using Vec2 = Point;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Sign of the orientation determinant of (a, b, c): +1 for a left turn,
// -1 for a right turn, 0 when collinear. Exact for all finite doubles.
int orientation(Point a, Point b, Point c);

// Distance from q to the closed segment [a, b].
double segment_distance(Point q, Point a, Point b);

struct Bbox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool overlaps(const Bbox& o, double tol = kGeomTolerance) const {
    return xmin <= o.xmax + tol && o.xmin <= xmax + tol && ymin <= o.ymax + tol &&
           o.ymin <= ymax + tol;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Strictly convex polygon with counterclockwise vertices. Construction
/// validates the invariant and throws Error(InvalidArgument) otherwise.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point> ccw_vertices);

  static ConvexPolygon rectangle(double xmin, double xmax, double ymin, double ymax);
  // Regular m-gon circumscribed about the disk (center, radius); vertex 0
  // sits at angle pi/m so that the first edge is vertical on the right.
  static ConvexPolygon circumscribed(Point center, double radius, int m);

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Bbox& bbox() const { return bbox_; }

  double area() const;
  Point centroid() const;
  double diameter_bound() const { return std::hypot(bbox_.width(), bbox_.height()); }

  // Closed containment: points within `tol` of the boundary count as inside.
  bool contains(Point q, double tol = kGeomTolerance) const;
  bool contains(const ConvexPolygon& inner, double tol = kGeomTolerance) const;
  bool contains_disk(Point center, double radius, double tol = kGeomTolerance) const;
  // Minimum over edges of the signed distance from q to the edge line;
  // positive inside.
  double inner_distance(Point q) const;

  ConvexPolygon translated(Vec2 t) const;

  friend bool operator==(const ConvexPolygon& a, const ConvexPolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Point> vertices_;
  Bbox bbox_;
};

/// {p : a.p <= b}
struct HalfPlane {
  Vec2 a;
  double b = 0.0;

  bool contains(Point p, double tol = kGeomTolerance) const {
    return dot(a, p) - b <= tol * norm(a);
  }
};

struct Hull {
  std::vector<Point> vertices;  // counterclockwise, strictly convex
  bool degenerate = false;      // fewer than three hull vertices

  ConvexPolygon polygon() const;
  // Degenerate hulls become thin rectangles of the given half-thickness;
  // non-degenerate hulls are returned unchanged.
  ConvexPolygon widened(double half_thickness = kGeomTolerance) const;
};

/// Monotone-chain hull with exact orientation tests.
/// Throws Error(EmptyInput) on an empty span.
Hull convex_hull(std::span<const Point> points);

// True iff the closed polygons are within `tol` of each other.
bool convex_intersects(const ConvexPolygon& p, const ConvexPolygon& q,
                       double tol = kGeomTolerance);

double convex_distance(const ConvexPolygon& p, const ConvexPolygon& q);

std::optional<ConvexPolygon> halfplane_intersection(std::span<const HalfPlane> hs,
                                                    const ConvexPolygon& window);

std::optional<ConvexPolygon> intersection(const ConvexPolygon& p, const ConvexPolygon& q);

inline double area(const ConvexPolygon& p) { return p.area(); }
inline bool contains(const ConvexPolygon& p, Point q) { return p.contains(q); }

}  // namespace membrane
