#include "membrane/lifting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "json_io.hpp"
#include "membrane/closure.hpp"
#include "membrane/error.hpp"

namespace membrane {

namespace {

struct ConstraintTag {
  std::size_t hole;
  std::size_t vertex;
  std::size_t other;
};

// Variables (a_x, a_y, b) of piece i >= 1 start at column 3 (i - 1).
std::size_t column(std::size_t piece) { return 3 * (piece - 1); }

void add_piece_terms(lp::Row& row, std::size_t piece, Point v, double sign) {
  if (piece == 0) return;
  const std::size_t c = column(piece);
  row.coeffs.push_back({c, sign * v.x});
  row.coeffs.push_back({c + 1, sign * v.y});
  row.coeffs.push_back({c + 2, sign});
}

Point vertex_mean(std::span<const ConvexPolygon> holes) {
  Point sum;
  std::size_t count = 0;
  for (const ConvexPolygon& h : holes) {
    for (Point v : h.vertices()) sum = sum + v;
    count += h.size();
  }
  return (1.0 / static_cast<double>(count)) * sum;
}

}  // namespace

double Lifting::margin(std::span<const ConvexPolygon> holes) const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (Point v : holes[i].vertices()) {
      for (std::size_t j = 0; j < holes.size(); ++j) {
        if (j != i) worst = std::min(worst, pieces[i](v) - pieces[j](v));
      }
    }
  }
  return worst;
}

LiftingResult lifting_feasible(std::span<const ConvexPolygon> holes) {
  if (holes.empty()) throw Error(ErrorCode::EmptyInput, "lifting needs at least one hole");
  const std::size_t n = holes.size();
  LiftingResult out;
  if (n == 1) {
    out.feasible = true;
    out.verified = true;
    out.lifting = Lifting{{AffinePiece{}}, {0}};
    return out;
  }

  const Point c = vertex_mean(holes);
  lp::Problem problem;
  problem.num_vars = 3 * (n - 1);
  problem.free.assign(problem.num_vars, true);
  std::vector<ConstraintTag> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const auto verts = holes[i].vertices();
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const Point v = verts[k] - c;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        lp::Row row{{}, lp::RowKind::GreaterEq, 1.0};
        add_piece_terms(row, i, v, 1.0);
        add_piece_terms(row, j, v, -1.0);
        problem.add_row(std::move(row));
        tags.push_back({i, k, j});
      }
    }
  }

  const lp::Result res = lp::solve(problem);
  out.feasible = res.feasible;
  out.verified = res.verified;
  if (res.feasible) {
    Lifting lifting;
    lifting.pieces.resize(n);
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t col = column(i);
      const Vec2 a{res.x[col], res.x[col + 1]};
      lifting.pieces[i] = {a, res.x[col + 2] - dot(a, c)};
    }
    lifting.hole_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) lifting.hole_ids[i] = static_cast<int>(i);
    out.lifting = std::move(lifting);
  } else if (res.certificate) {
    const lp::Certificate& lc = *res.certificate;
    LiftingCertificate cert;
    cert.verified = lc.verified;
    std::vector<bool> named(n, false);
    for (std::size_t r = 0; r < lc.y.size(); ++r) {
      const bool nonzero = lc.exact.empty() ? lc.y[r] != 0.0 : lc.exact[r] != "0";
      if (!nonzero) continue;
      LiftingCertificate::Term t{tags[r].hole, tags[r].vertex, tags[r].other, lc.y[r],
                                 lc.exact.empty() ? std::string() : lc.exact[r]};
      cert.terms.push_back(std::move(t));
      named[tags[r].hole] = true;
      named[tags[r].other] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (named[i]) cert.support.push_back(i);
    }
    out.certificate = std::move(cert);
  }
  return out;
}

Subdivision envelope_subdivision(const Lifting& lifting, const Window& window) {
  const std::size_t n = lifting.pieces.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "lifting has no pieces");
  const double extent = std::max({window.width(), window.height(), 1.0});
  double amax = 0.0;
  for (const AffinePiece& p : lifting.pieces) amax = std::max(amax, norm(p.a));
  const double grad_tol = 1e-12 * std::max(amax, 1.0);

  Subdivision sub;
  const ConvexPolygon frame = window.polygon();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<HalfPlane> hs;
    bool empty = false;
    for (std::size_t j = 0; j < n && !empty; ++j) {
      if (j == i) continue;
      const Vec2 da = lifting.pieces[j].a - lifting.pieces[i].a;
      const double db = lifting.pieces[i].b - lifting.pieces[j].b;
      if (norm(da) <= grad_tol) {
        if (std::abs(db) <= 1e-12 * extent * std::max(amax, 1.0)) {
          throw Error(ErrorCode::DegenerateLifting,
                      "pieces " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
        }
        if (db < 0.0) empty = true;
        continue;
      }
      hs.push_back({da, db});
    }
    if (empty) continue;
    if (auto cell = halfplane_intersection(hs, frame)) {
      sub.cell_hole.push_back(i);
      sub.cells.push_back(std::move(*cell));
    }
  }

  // Shared vertex set, merged within a snapping tolerance.
  const double snap = 1e-8 * extent;
  std::vector<Point>& verts = sub.framework.vertices;
  auto vertex_id = [&](Point p) {
    for (std::size_t k = 0; k < verts.size(); ++k) {
      if (norm(verts[k] - p) <= snap) return k;
    }
    verts.push_back(p);
    return verts.size() - 1;
  };
  for (const ConvexPolygon& cell : sub.cells) {
    for (Point v : cell.vertices()) vertex_id(v);
  }
  auto on_side = [&](Point p) {
    return std::array<bool, 4>{std::abs(p.x - window.xmin) <= snap, std::abs(p.x - window.xmax) <= snap,
                               std::abs(p.y - window.ymin) <= snap, std::abs(p.y - window.ymax) <= snap};
  };

  // Split cell edges at every shared vertex lying on them, and pair the
  // cells on either side of each piece.
  std::map<Edge, std::vector<std::size_t>> owners;
  for (std::size_t c = 0; c < sub.cells.size(); ++c) {
    const auto cv = sub.cells[c].vertices();
    for (std::size_t k = 0; k < cv.size(); ++k) {
      const Point p = cv[k];
      const Point q = cv[(k + 1) % cv.size()];
      const Vec2 d = q - p;
      const double len2 = dot(d, d);
      std::vector<std::pair<double, std::size_t>> on;
      for (std::size_t w = 0; w < verts.size(); ++w) {
        if (segment_distance(verts[w], p, q) <= snap) on.push_back({dot(verts[w] - p, d) / len2, w});
      }
      std::sort(on.begin(), on.end());
      for (std::size_t t = 0; t + 1 < on.size(); ++t) {
        const std::size_t u = on[t].second;
        const std::size_t w = on[t + 1].second;
        if (u == w) continue;
        const auto su = on_side(verts[u]);
        const auto sw = on_side(verts[w]);
        bool boundary = false;
        for (int s = 0; s < 4; ++s) boundary = boundary || (su[s] && sw[s]);
        if (boundary) continue;
        owners[{std::min(u, w), std::max(u, w)}].push_back(c);
      }
    }
  }
  for (const auto& [edge, cells] : owners) {
    if (cells.size() != 2) {
      throw Error(ErrorCode::InternalInconsistency,
                  "envelope edge is bounded by " + std::to_string(cells.size()) + " cells");
    }
    sub.framework.edges.push_back(edge);
    sub.edge_pieces.push_back({sub.cell_hole[cells[0]], sub.cell_hole[cells[1]]});
  }
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const auto s = on_side(verts[k]);
    if (s[0] || s[1] || s[2] || s[3]) sub.framework.pinned.push_back(k);
  }
  return sub;
}

std::vector<double> stresses_from_lifting(const Lifting& lifting, const Subdivision& sub) {
  const Framework& fw = sub.framework;
  std::vector<double> s(fw.edges.size());
  for (std::size_t e = 0; e < fw.edges.size(); ++e) {
    const auto [u, v] = fw.edges[e];
    const auto [i, j] = sub.edge_pieces[e];
    const Vec2 jump = lifting.pieces[j].a - lifting.pieces[i].a;
    const Vec2 d = fw.vertices[v] - fw.vertices[u];
    const double scale = norm(jump) * norm(d);
    if (!(scale > 0.0) || std::abs(dot(jump, d)) > 1e-7 * scale) {
      throw Error(ErrorCode::InternalInconsistency,
                  "gradient jump across edge " + std::to_string(e) + " is not perpendicular to it");
    }
    s[e] = norm(jump) / norm(d);
  }
  return s;
}

namespace {

HoleSystem closure_fixed_point(HoleSystem holes, const Window& window) {
  ClosureOptions opts;
  opts.max_gen = static_cast<int>(holes.size()) + 1;
  opts.stop_on_cover = false;
  opts.area_scanlines = 8;
  ClosureResult r = closure_run(initial_defects(holes), window, opts);
  return std::move(r.final_defects.defects);
}

HoleSystem subset(std::span<const ConvexPolygon> holes, const std::vector<std::size_t>& idx) {
  HoleSystem out;
  for (std::size_t k : idx) out.push_back(holes[k]);
  return out;
}

ConvexPolygon hull_of(std::span<const ConvexPolygon> holes, const std::vector<std::size_t>& idx) {
  std::vector<Point> pts;
  for (std::size_t k : idx) pts.insert(pts.end(), holes[k].vertices().begin(), holes[k].vertices().end());
  return convex_hull(pts).widened();
}

}  // namespace

HoleSystem h_min_approx(std::span<const ConvexPolygon> holes, const Window& window) {
  if (holes.empty()) return {};
  HoleSystem cur(holes.begin(), holes.end());
  for (;;) {
    cur = closure_fixed_point(std::move(cur), window);
    const LiftingResult res = lifting_feasible(cur);
    if (res.feasible) return cur;

    std::vector<std::size_t> keep;
    if (res.certificate && res.certificate->support.size() >= 2) {
      keep = res.certificate->support;
    } else {
      for (std::size_t k = 0; k < cur.size(); ++k) keep.push_back(k);
    }
    // Deletion filter: drop each hole whose removal keeps the rest infeasible.
    for (std::size_t t = 0; t < keep.size() && keep.size() > 2;) {
      std::vector<std::size_t> trial = keep;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(t));
      if (!lifting_feasible(subset(cur, trial)).feasible) {
        keep = std::move(trial);
      } else {
        ++t;
      }
    }
    HoleSystem next;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (!std::binary_search(keep.begin(), keep.end(), k)) next.push_back(cur[k]);
    }
    next.push_back(hull_of(cur, keep));
    cur = std::move(next);
  }
}

HminSearch h_min_search(std::span<const ConvexPolygon> holes) {
  if (holes.empty()) throw Error(ErrorCode::EmptyInput, "search needs at least one hole");
  std::size_t vertex_count = 0;
  for (const ConvexPolygon& h : holes) vertex_count += h.size();
  if (vertex_count > kHminOracleVertexLimit) {
    throw Error(ErrorCode::TooLarge, std::to_string(vertex_count) + " vertices exceed the limit of " +
                                         std::to_string(kHminOracleVertexLimit));
  }
  const std::size_t n = holes.size();
  HminSearch best;
  best.area = std::numeric_limits<double>::infinity();
  std::vector<double> feasible_areas;

  // Restricted growth strings enumerate set partitions.
  std::vector<std::size_t> label(n, 0);
  for (;;) {
    const std::size_t blocks = *std::max_element(label.begin(), label.end()) + 1;
    HoleSystem sys;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < n; ++k) {
        if (label[k] == b) idx.push_back(k);
      }
      sys.push_back(idx.size() == 1 ? holes[idx[0]] : hull_of(holes, idx));
    }
    ++best.candidates;
    bool disjoint = true;
    for (std::size_t a = 0; a < sys.size() && disjoint; ++a) {
      for (std::size_t b = a + 1; b < sys.size() && disjoint; ++b) {
        disjoint = !convex_intersects(sys[a], sys[b]);
      }
    }
    if (disjoint && lifting_feasible(sys).feasible) {
      ++best.feasible;
      const double a = total_area(sys);
      feasible_areas.push_back(a);
      if (a < best.area) {
        best.area = a;
        best.system = std::move(sys);
      }
    }

    std::size_t k = n - 1;
    for (; k > 0; --k) {
      std::size_t prefix_max = 0;
      for (std::size_t t = 0; t < k; ++t) prefix_max = std::max(prefix_max, label[t]);
      if (label[k] <= prefix_max) {
        ++label[k];
        std::fill(label.begin() + static_cast<std::ptrdiff_t>(k) + 1, label.end(), 0);
        break;
      }
    }
    if (k == 0) break;
  }
  for (double a : feasible_areas) {
    if (a <= best.area + 1e-9 * (1.0 + best.area)) ++best.minimal;
  }
  return best;
}

HoleSystem h_min_oracle(std::span<const ConvexPolygon> holes) { return h_min_search(holes).system; }

HoleSystem mesh(std::span<const ConvexPolygon> h1, std::span<const ConvexPolygon> h2) {
  HoleSystem out;
  for (const ConvexPolygon& p : h1) {
    for (const ConvexPolygon& q : h2) {
      if (auto r = intersection(p, q)) out.push_back(std::move(*r));
    }
  }
  return out;
}

bool system_contained(std::span<const ConvexPolygon> inner, std::span<const ConvexPolygon> outer, double tol) {
  return std::all_of(inner.begin(), inner.end(), [&](const ConvexPolygon& p) {
    return std::any_of(outer.begin(), outer.end(), [&](const ConvexPolygon& q) { return q.contains(p, tol); });
  });
}

double total_area(std::span<const ConvexPolygon> holes) {
  double a = 0.0;
  for (const ConvexPolygon& h : holes) a += h.area();
  return a;
}

HoleSystem pinwheel(Point center, double scale) {
  // Triangle 0 runs along y = -1 from a thick end at x = -5 to a tip just
  // short of the line carrying triangle 1; the others are its rotations.
  const std::vector<Point> base{{-5.0, -1.0}, {1.5, -1.0}, {-5.0, -1.5}};
  HoleSystem out;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 3.0;
    const double ct = std::cos(t);
    const double st = std::sin(t);
    std::vector<Point> pts;
    for (Point p : base) pts.push_back(center + scale * Point{ct * p.x - st * p.y, st * p.x + ct * p.y});
    out.push_back(convex_hull(pts).polygon());
  }
  return out;
}

Scene pinwheel_scene() { return scene_from_holes(pinwheel({10.0, 10.0}), square_window(20.0)); }

HoleSystem scene_hole_system(const Scene& scene, int disk_resolution) {
  HoleSystem out;
  out.reserve(scene.holes.size());
  for (const Hole& h : scene.holes) out.push_back(hole_polygon(h, disk_resolution));
  return out;
}

Scene scene_from_holes(std::span<const ConvexPolygon> holes, const Window& window) {
  Scene scene;
  scene.window = window;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Point c = holes[i].centroid();
    PolygonShape shape;
    for (Point v : holes[i].vertices()) shape.offsets.push_back(v - c);
    scene.holes.push_back({static_cast<int>(i), c, std::move(shape)});
  }
  return scene;
}

std::string lifting_to_json(const Scene& scene, const Lifting& lifting) {
  using detail::format_double;
  std::ostringstream out;
  out << "{\n" << detail::scene_fields(scene) << ",\n  \"lifting\": [";
  for (std::size_t i = 0; i < lifting.pieces.size(); ++i) {
    const AffinePiece& p = lifting.pieces[i];
    const int id = i < lifting.hole_ids.size() ? lifting.hole_ids[i] : static_cast<int>(i);
    out << (i ? ",\n    " : "\n    ") << "{\"hole_id\": " << id << ", \"a\": [" << format_double(p.a.x)
        << ", " << format_double(p.a.y) << "], \"b\": " << format_double(p.b) << "}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

std::string certificate_to_json(const LiftingCertificate& cert, std::span<const int> hole_ids) {
  auto id = [&](std::size_t k) { return k < hole_ids.size() ? hole_ids[k] : static_cast<int>(k); };
  detail::json doc;
  doc["verified"] = cert.verified;
  doc["support"] = detail::json::array();
  for (std::size_t k : cert.support) doc["support"].push_back(id(k));
  doc["terms"] = detail::json::array();
  for (const auto& t : cert.terms) {
    detail::json term{{"hole_id", id(t.hole)}, {"vertex", t.vertex}, {"other_id", id(t.other)},
                      {"multiplier", t.multiplier}};
    if (!t.exact.empty()) term["exact"] = t.exact;
    doc["terms"].push_back(std::move(term));
  }
  return doc.dump(2) + "\n";
}

Lifting lifting_from_json(const std::string& text) {
  using namespace detail;
  const json doc = parse_json(text);
  const json& arr = require_array(require_field(doc, "lifting", ""), "lifting");
  Lifting out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "lifting[" + std::to_string(i) + "]";
    const XY a = require_pair(require_field(arr[i], "a", path), path + ".a");
    const double b = require_number(require_field(arr[i], "b", path), path + ".b");
    out.pieces.push_back({{a.x, a.y}, b});
    out.hole_ids.push_back(static_cast<int>(require_integer(require_field(arr[i], "hole_id", path), path + ".hole_id")));
  }
  return out;
}

}  // namespace membrane
