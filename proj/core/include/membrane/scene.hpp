#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "membrane/geom.hpp"
#include "membrane/rng.hpp"

namespace membrane {

/// Axis-aligned observation window.
struct Window {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  Window padded(double pad) const { return {xmin - pad, xmax + pad, ymin - pad, ymax + pad}; }
  bool contains(Point p) const { return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax; }
  ConvexPolygon polygon() const { return ConvexPolygon::rectangle(xmin, xmax, ymin, ymax); }

  friend bool operator==(const Window&, const Window&) = default;
};

Window square_window(double side);

struct DiskShape {
  double radius = 1.0;
  friend bool operator==(const DiskShape&, const DiskShape&) = default;
};

// Convex polygon given by vertex offsets from the hole center, which must
// lie strictly inside.
struct PolygonShape {
  std::vector<Vec2> offsets;
  friend bool operator==(const PolygonShape&, const PolygonShape&) = default;
};

using HoleShape = std::variant<DiskShape, PolygonShape>;

struct Hole {
  int id = 0;
  Point center;
  HoleShape shape;

  bool is_disk() const { return std::holds_alternative<DiskShape>(shape); }
  friend bool operator==(const Hole&, const Hole&) = default;
};

// Minimum of the radial function of the shape about its center: the radius
// of the largest disk centered at the hole center that the hole contains.
double inscribed_radius(const HoleShape& shape);
// Maximum distance from the center to the hole boundary.
double circumradius(const HoleShape& shape);

// Throws Error(InvalidArgument) if the shape breaks its invariant.
void validate_shape(const HoleShape& shape);

// Polygon occupied by the hole; disks become circumscribed m-gons.
ConvexPolygon hole_polygon(const Hole& hole, int disk_resolution);

// True when q lies in the hole at least `margin` inside its boundary.
bool hole_contains(const Hole& hole, Point q, double margin = 0.0);

struct FixedDisk {
  double radius = 1.0;
};
struct DiskRadiusUniform {
  double rmin = 0.5;
  double rmax = 1.5;
};
struct DiskRadiusDiscrete {
  std::vector<double> radii;
  std::vector<double> weights;
};
// Vertex count uniform on [min_vertices, max_vertices] (capped at 32),
// angles sorted uniform on [0, 2pi), radii uniform on [rmin, rmax].
struct RandomPolygonLaw {
  int min_vertices = 3;
  int max_vertices = 8;
  double rmin = 0.5;
  double rmax = 1.5;
};

using ShapeDistribution = std::variant<FixedDisk, DiskRadiusUniform, DiskRadiusDiscrete, RandomPolygonLaw>;

inline constexpr int kMaxPolygonVertices = 32;

HoleShape sample_shape(const ShapeDistribution& dist, Rng& rng);

// Parses "disk:R", "uniform:RMIN:RMAX", "discrete:R1@W1,R2@W2,...",
// "polygon:NMIN:NMAX:RMIN:RMAX".
ShapeDistribution parse_shape_distribution(const std::string& text);
std::string to_string(const ShapeDistribution& dist);

struct Scene {
  Window window;
  double pad = 0.0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::vector<Hole> holes;

  Window padded_window() const { return window.padded(pad); }
  friend bool operator==(const Scene&, const Scene&) = default;
};

// Default pad: a quarter of the longer window side.
double default_pad(const Window& window);

/// Poisson(lambda * area) centers, uniform on the padded window, with IID
/// shapes drawn from `dist`. Center count, positions and shapes come from
/// three independent streams derived from `seed`.
Scene sample_poisson_scene(const Window& window, double pad, double lambda,
                           const ShapeDistribution& dist, std::uint64_t seed);

// Adds an independent Poisson layer of rate `extra_rate` to `base`; the
// result has rate base.lambda + extra_rate and keeps every base hole.
Scene superpose(const Scene& base, double extra_rate, const ShapeDistribution& dist,
                std::uint64_t layer_seed);

// Keeps holes with inscribed radius >= r.
Scene thin_scene(const Scene& scene, double r);

// Replaces every disk by its circumscribed regular m-gon (m >= 8).
Scene discretize(const Scene& scene, int m);

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
void write_scene(const Scene& scene, const std::filesystem::path& path);
Scene read_scene(const std::filesystem::path& path);

}  // namespace membrane
