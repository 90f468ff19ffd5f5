#include "membrane/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json_io.hpp"
#include "membrane/error.hpp"

namespace membrane {

Window square_window(double side) { return {0.0, side, 0.0, side}; }

double inscribed_radius(const HoleShape& shape) {
  if (const auto* d = std::get_if<DiskShape>(&shape)) return d->radius;
  const auto& poly = std::get<PolygonShape>(shape);
  return ConvexPolygon(poly.offsets).inner_distance({0.0, 0.0});
}

double circumradius(const HoleShape& shape) {
  if (const auto* d = std::get_if<DiskShape>(&shape)) return d->radius;
  double r = 0.0;
  for (const Vec2& v : std::get<PolygonShape>(shape).offsets) r = std::max(r, norm(v));
  return r;
}

void validate_shape(const HoleShape& shape) {
  if (const auto* d = std::get_if<DiskShape>(&shape)) {
    if (!(d->radius > 0.0) || !std::isfinite(d->radius)) {
      throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
    }
    return;
  }
  const ConvexPolygon poly(std::get<PolygonShape>(shape).offsets);
  if (!(poly.inner_distance({0.0, 0.0}) > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "polygon hole must contain its center strictly");
  }
}

ConvexPolygon hole_polygon(const Hole& hole, int disk_resolution) {
  if (const auto* d = std::get_if<DiskShape>(&hole.shape)) {
    return ConvexPolygon::circumscribed(hole.center, d->radius, disk_resolution);
  }
  std::vector<Point> v;
  for (const Vec2& o : std::get<PolygonShape>(hole.shape).offsets) v.push_back(hole.center + o);
  return ConvexPolygon(std::move(v));
}

bool hole_contains(const Hole& hole, Point q, double margin) {
  if (const auto* d = std::get_if<DiskShape>(&hole.shape)) {
    return norm(q - hole.center) <= d->radius - margin;
  }
  const ConvexPolygon local(std::get<PolygonShape>(hole.shape).offsets);
  return local.inner_distance(q - hole.center) >= margin;
}

namespace {

PolygonShape sample_polygon(const RandomPolygonLaw& law, Rng& rng) {
  const int lo = std::clamp(law.min_vertices, 3, kMaxPolygonVertices);
  const int hi = std::clamp(law.max_vertices, lo, kMaxPolygonVertices);
  std::uniform_int_distribution<int> count(lo, hi);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(law.rmin, law.rmax);
  for (;;) {
    const int n = count(rng);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = angle(rng);
    std::sort(angles.begin(), angles.end());
    std::vector<Point> pts;
    pts.reserve(angles.size());
    for (double a : angles) {
      const double r = radius(rng);
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const Hull hull = convex_hull(pts);
    if (hull.degenerate) continue;
    const ConvexPolygon poly(hull.vertices);
    // The hole must contain its center strictly; otherwise resample.
    if (!(poly.inner_distance({0.0, 0.0}) > 0.0)) continue;
    return PolygonShape{hull.vertices};
  }
}

}  // namespace

HoleShape sample_shape(const ShapeDistribution& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& law) -> HoleShape {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FixedDisk>) {
          return DiskShape{law.radius};
        } else if constexpr (std::is_same_v<T, DiskRadiusUniform>) {
          std::uniform_real_distribution<double> r(law.rmin, law.rmax);
          return DiskShape{r(rng)};
        } else if constexpr (std::is_same_v<T, DiskRadiusDiscrete>) {
          std::discrete_distribution<std::size_t> pick(law.weights.begin(), law.weights.end());
          return DiskShape{law.radii.at(pick(rng))};
        } else {
          return sample_polygon(law, rng);
        }
      },
      dist);
}

namespace {

void validate_distribution(const ShapeDistribution& dist) {
  std::visit(
      [](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FixedDisk>) {
          if (!(law.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
        } else if constexpr (std::is_same_v<T, DiskRadiusUniform>) {
          if (!(law.rmin > 0.0) || law.rmax < law.rmin) {
            throw Error(ErrorCode::InvalidArgument, "uniform radius law needs 0 < rmin <= rmax");
          }
        } else if constexpr (std::is_same_v<T, DiskRadiusDiscrete>) {
          if (law.radii.empty() || law.radii.size() != law.weights.size()) {
            throw Error(ErrorCode::InvalidArgument, "discrete radius law needs matching radii and weights");
          }
          for (double r : law.radii) {
            if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "discrete radii must be positive");
          }
        } else {
          if (!(law.rmin > 0.0) || law.rmax < law.rmin || law.max_vertices < 3) {
            throw Error(ErrorCode::InvalidArgument, "invalid random polygon law");
          }
        }
      },
      dist);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "' in shape law");
  }
}

}  // namespace

ShapeDistribution parse_shape_distribution(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "empty shape law");
  const std::string& kind = parts[0];
  ShapeDistribution dist;
  if (kind == "disk" && parts.size() == 2) {
    dist = FixedDisk{to_double(parts[1])};
  } else if (kind == "uniform" && parts.size() == 3) {
    dist = DiskRadiusUniform{to_double(parts[1]), to_double(parts[2])};
  } else if (kind == "discrete" && parts.size() == 2) {
    DiskRadiusDiscrete law;
    for (const std::string& item : split(parts[1], ',')) {
      const auto rw = split(item, '@');
      if (rw.size() != 2) throw Error(ErrorCode::InvalidArgument, "discrete law item must be R@W");
      law.radii.push_back(to_double(rw[0]));
      law.weights.push_back(to_double(rw[1]));
    }
    dist = law;
  } else if (kind == "polygon" && parts.size() == 5) {
    dist = RandomPolygonLaw{static_cast<int>(to_double(parts[1])), static_cast<int>(to_double(parts[2])),
                            to_double(parts[3]), to_double(parts[4])};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown shape law '" + text + "'");
  }
  validate_distribution(dist);
  return dist;
}

std::string to_string(const ShapeDistribution& dist) {
  return std::visit(
      [](const auto& law) -> std::string {
        using T = std::decay_t<decltype(law)>;
        using detail::format_double;
        if constexpr (std::is_same_v<T, FixedDisk>) {
          return "disk:" + format_double(law.radius);
        } else if constexpr (std::is_same_v<T, DiskRadiusUniform>) {
          return "uniform:" + format_double(law.rmin) + ":" + format_double(law.rmax);
        } else if constexpr (std::is_same_v<T, DiskRadiusDiscrete>) {
          std::string s = "discrete:";
          for (std::size_t i = 0; i < law.radii.size(); ++i) {
            if (i) s += ",";
            s += format_double(law.radii[i]) + "@" + format_double(law.weights[i]);
          }
          return s;
        } else {
          return "polygon:" + std::to_string(law.min_vertices) + ":" + std::to_string(law.max_vertices) +
                 ":" + format_double(law.rmin) + ":" + format_double(law.rmax);
        }
      },
      dist);
}

double default_pad(const Window& window) { return 0.25 * std::max(window.width(), window.height()); }

namespace {

// Stream tags for the three independent streams of one scene layer.
constexpr std::uint64_t kCountStream = 0;
constexpr std::uint64_t kCenterStream = 1;
constexpr std::uint64_t kShapeStream = 2;

std::vector<Hole> sample_layer(const Window& region, double lambda, const ShapeDistribution& dist,
                               std::uint64_t seed, int first_id) {
  Rng count_rng = make_rng(seed, kCountStream);
  Rng center_rng = make_rng(seed, kCenterStream);
  Rng shape_rng = make_rng(seed, kShapeStream);
  std::poisson_distribution<long long> count(lambda * region.area());
  const long long n = count(count_rng);
  std::uniform_real_distribution<double> ux(region.xmin, region.xmax);
  std::uniform_real_distribution<double> uy(region.ymin, region.ymax);
  std::vector<Hole> holes;
  holes.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double x = ux(center_rng);
    const double y = uy(center_rng);
    holes.push_back({first_id + static_cast<int>(i), {x, y}, sample_shape(dist, shape_rng)});
  }
  return holes;
}

void check_window(const Window& w) {
  if (!(w.xmax > w.xmin) || !(w.ymax > w.ymin)) {
    throw Error(ErrorCode::InvalidArgument, "window must have positive extent");
  }
}

}  // namespace

Scene sample_poisson_scene(const Window& window, double pad, double lambda,
                           const ShapeDistribution& dist, std::uint64_t seed) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidRate, "Poisson rate must be positive");
  }
  check_window(window);
  if (!(pad >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pad must be non-negative");
  validate_distribution(dist);
  Scene scene{window, pad, lambda, seed, {}};
  scene.holes = sample_layer(scene.padded_window(), lambda, dist, seed, 0);
  return scene;
}

Scene superpose(const Scene& base, double extra_rate, const ShapeDistribution& dist,
                std::uint64_t layer_seed) {
  if (!(extra_rate > 0.0)) throw Error(ErrorCode::InvalidRate, "superposed rate must be positive");
  validate_distribution(dist);
  Scene out = base;
  int next_id = 0;
  for (const Hole& h : base.holes) next_id = std::max(next_id, h.id + 1);
  auto extra = sample_layer(base.padded_window(), extra_rate, dist, layer_seed, next_id);
  out.holes.insert(out.holes.end(), extra.begin(), extra.end());
  out.lambda = base.lambda + extra_rate;
  return out;
}

Scene thin_scene(const Scene& scene, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "thinning radius must be positive");
  Scene out = scene;
  out.holes.clear();
  for (const Hole& h : scene.holes) {
    if (inscribed_radius(h.shape) >= r) out.holes.push_back(h);
  }
  return out;
}

Scene discretize(const Scene& scene, int m) {
  if (m < 8) throw Error(ErrorCode::TooCoarse, "disk discretization needs m >= 8");
  Scene out = scene;
  for (Hole& h : out.holes) {
    if (!h.is_disk()) continue;
    const ConvexPolygon poly = ConvexPolygon::circumscribed({0.0, 0.0}, std::get<DiskShape>(h.shape).radius, m);
    h.shape = PolygonShape{{poly.vertices().begin(), poly.vertices().end()}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scene file

namespace detail {

std::string scene_fields(const Scene& scene) {
  std::ostringstream out;
  const Window& w = scene.window;
  out << "  \"window\": {\"xmin\": " << format_double(w.xmin) << ", \"xmax\": " << format_double(w.xmax)
      << ", \"ymin\": " << format_double(w.ymin) << ", \"ymax\": " << format_double(w.ymax) << "},\n";
  out << "  \"pad\": " << format_double(scene.pad) << ",\n";
  out << "  \"lambda\": " << format_double(scene.lambda) << ",\n";
  out << "  \"seed\": " << scene.seed << ",\n";
  out << "  \"holes\": [";
  for (std::size_t i = 0; i < scene.holes.size(); ++i) {
    const Hole& h = scene.holes[i];
    out << (i ? ",\n    " : "\n    ");
    out << "{\"id\": " << h.id << ", \"center\": [" << format_double(h.center.x) << ", "
        << format_double(h.center.y) << "], ";
    if (const auto* d = std::get_if<DiskShape>(&h.shape)) {
      out << "\"kind\": \"disk\", \"radius\": " << format_double(d->radius) << "}";
    } else {
      out << "\"kind\": \"polygon\", \"vertices\": [";
      const auto& offs = std::get<PolygonShape>(h.shape).offsets;
      for (std::size_t k = 0; k < offs.size(); ++k) {
        if (k) out << ", ";
        out << "[" << format_double(offs[k].x) << ", " << format_double(offs[k].y) << "]";
      }
      out << "]}";
    }
  }
  out << (scene.holes.empty() ? "]" : "\n  ]");
  return out.str();
}

Scene scene_from_value(const json& doc) {
  Scene scene;
  const json& w = require_field(doc, "window", "");
  scene.window = {require_number(require_field(w, "xmin", "window"), "window.xmin"),
                  require_number(require_field(w, "xmax", "window"), "window.xmax"),
                  require_number(require_field(w, "ymin", "window"), "window.ymin"),
                  require_number(require_field(w, "ymax", "window"), "window.ymax")};
  try {
    check_window(scene.window);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("window: ") + e.what());
  }
  scene.pad = require_number(require_field(doc, "pad", ""), "pad");
  scene.lambda = require_number(require_field(doc, "lambda", ""), "lambda");
  const json& seed = require_field(doc, "seed", "");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw Error(ErrorCode::ParseError, "field 'seed' must be a non-negative integer");
  }
  scene.seed = seed.get<std::uint64_t>();
  const json& holes = require_array(require_field(doc, "holes", ""), "holes");
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const std::string path = "holes[" + std::to_string(i) + "]";
    const json& h = holes[i];
    Hole hole;
    hole.id = static_cast<int>(require_integer(require_field(h, "id", path), path + ".id"));
    const XY c = require_pair(require_field(h, "center", path), path + ".center");
    hole.center = {c.x, c.y};
    const json& kind = require_field(h, "kind", path);
    if (kind == "disk") {
      hole.shape = DiskShape{require_number(require_field(h, "radius", path), path + ".radius")};
    } else if (kind == "polygon") {
      const json& verts = require_array(require_field(h, "vertices", path), path + ".vertices");
      PolygonShape poly;
      for (std::size_t k = 0; k < verts.size(); ++k) {
        const XY v = require_pair(verts[k], path + ".vertices[" + std::to_string(k) + "]");
        poly.offsets.push_back({v.x, v.y});
      }
      hole.shape = std::move(poly);
    } else {
      throw Error(ErrorCode::ParseError, "field '" + path + ".kind' must be \"disk\" or \"polygon\"");
    }
    try {
      validate_shape(hole.shape);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    scene.holes.push_back(std::move(hole));
  }
  return scene;
}

}  // namespace detail

std::string scene_to_json(const Scene& scene) { return "{\n" + detail::scene_fields(scene) + "\n}\n"; }

Scene scene_from_json(const std::string& text) { return detail::scene_from_value(detail::parse_json(text)); }

void write_scene(const Scene& scene, const std::filesystem::path& path) {
  detail::write_text_file(path.string(), scene_to_json(scene));
}

Scene read_scene(const std::filesystem::path& path) {
  return scene_from_json(detail::read_text_file(path.string()));
}

}  // namespace membrane
