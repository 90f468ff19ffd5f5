#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "membrane/geom.hpp"
#include "membrane/lp.hpp"
#include "membrane/scene.hpp"
#include "membrane/stress.hpp"

namespace membrane {

// Convex holes with pairwise disjoint interiors.
using HoleSystem = std::vector<ConvexPolygon>;

/// l(x) = a.x + b in window coordinates.
struct AffinePiece {
  Vec2 a;
  double b = 0.0;

  double operator()(Point x) const { return dot(a, x) + b; }
};

/// One affine piece per hole, with pieces[0] identically zero. Every vertex
/// v of hole i satisfies l_i(v) >= l_j(v) + 1 for all j != i (up to LP
/// tolerance).
struct Lifting {
  std::vector<AffinePiece> pieces;
  std::vector<int> hole_ids;  // label per piece; 0..n-1 unless set by the caller

  // Smallest l_i(v) - l_j(v) over hole vertices; the lifting is valid when
  // this is at least 1 - tolerance.
  double margin(std::span<const ConvexPolygon> holes) const;
};

/// Farkas witness for the lifting program. Each multiplier belongs to the
/// constraint "hole `hole` beats hole `other` at its vertex `vertex`".
struct LiftingCertificate {
  struct Term {
    std::size_t hole = 0;
    std::size_t vertex = 0;
    std::size_t other = 0;
    double multiplier = 0.0;
    std::string exact;  // "p/q" when verified
  };
  std::vector<Term> terms;          // nonzero multipliers only
  std::vector<std::size_t> support; // holes named by some term, increasing
  bool verified = false;
};

struct LiftingResult {
  bool feasible = false;
  std::optional<Lifting> lifting;
  std::optional<LiftingCertificate> certificate;
  bool verified = false;
};

/// Decides whether the holes lift to distinct facets of a convex piecewise
/// linear surface. Coordinates are centered before solving.
LiftingResult lifting_feasible(std::span<const ConvexPolygon> holes);

/// Cell of each hole in the upper envelope of the lifting, clipped to the
/// window, and the envelope's interior 1-skeleton as a framework.
struct Subdivision {
  std::vector<std::size_t> cell_hole;        // piece index owning cells[c]
  std::vector<ConvexPolygon> cells;
  Framework framework;                       // vertices on the window boundary are pinned
  std::vector<std::pair<std::size_t, std::size_t>> edge_pieces;  // pieces on either side of each edge
};

// Throws Error(DegenerateLifting) when two pieces coincide.
Subdivision envelope_subdivision(const Lifting& lifting, const Window& window);

// s = |a_j - a_i| / |q - p| on each framework edge. Throws
// Error(InternalInconsistency) when a gradient jump is not perpendicular
// to its edge.
std::vector<double> stresses_from_lifting(const Lifting& lifting, const Subdivision& sub);

/// Closure to a fixed point, lifting check, and merging of an irreducible
/// infeasible subset into its hull, repeated until the system lifts.
HoleSystem h_min_approx(std::span<const ConvexPolygon> holes, const Window& window);

struct HminSearch {
  HoleSystem system;                  // a minimal-area feasible covering system
  double area = 0.0;
  std::size_t candidates = 0;         // systems examined
  std::size_t feasible = 0;           // of which lift
  std::size_t minimal = 0;            // feasible systems within tolerance of the minimal area
};

inline constexpr std::size_t kHminOracleVertexLimit = 14;

/// Exhaustive search over systems whose holes are hulls of blocks of a
/// partition of the input. Throws Error(TooLarge) beyond
/// kHminOracleVertexLimit input vertices.
HminSearch h_min_search(std::span<const ConvexPolygon> holes);
HoleSystem h_min_oracle(std::span<const ConvexPolygon> holes);

// Nonempty pairwise intersections of holes of h1 with holes of h2.
HoleSystem mesh(std::span<const ConvexPolygon> h1, std::span<const ConvexPolygon> h2);

// Every polygon of `inner` lies in some polygon of `outer`.
bool system_contained(std::span<const ConvexPolygon> inner, std::span<const ConvexPolygon> outer,
                      double tol = kGeomTolerance);
double total_area(std::span<const ConvexPolygon> holes);

/// Three thin triangles in 120-degree rotational symmetry about `center`;
/// each pair can be separated by a line but no convex lifting exists.
HoleSystem pinwheel(Point center = {0.0, 0.0}, double scale = 1.0);
Scene pinwheel_scene();

// Scene holes as polygons, with disks replaced by circumscribed m-gons.
HoleSystem scene_hole_system(const Scene& scene, int disk_resolution = 64);
// Scene with one polygon hole per entry of `holes`, centered at its centroid.
Scene scene_from_holes(std::span<const ConvexPolygon> holes, const Window& window);

// Scene document with an added "lifting" array of {hole_id, a, b}.
std::string lifting_to_json(const Scene& scene, const Lifting& lifting);
// Certificate as {"verified", "support", "terms": [{hole, vertex, other, multiplier, exact}]}.
std::string certificate_to_json(const LiftingCertificate& cert, std::span<const int> hole_ids = {});
Lifting lifting_from_json(const std::string& text);

}  // namespace membrane
