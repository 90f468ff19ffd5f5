#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "membrane/geom.hpp"
#include "membrane/lp.hpp"

namespace membrane {

using Edge = std::pair<std::size_t, std::size_t>;

/// Planar bar framework with a pinned vertex subset. `stress` is either
/// empty or holds one value per edge.
struct Framework {
  std::vector<Point> vertices;
  std::vector<Edge> edges;
  std::vector<std::size_t> pinned;
  std::vector<double> stress;

  std::vector<bool> pinned_mask() const;
  double max_edge_length() const;
};

// Throws Error(InvalidArgument) on self-loops, duplicate edges, bad indices,
// coincident edge endpoints or a stress vector of the wrong length.
void validate(const Framework& fw);

struct EquilibriumResidual {
  std::vector<std::size_t> vertex;  // unpinned vertices, increasing
  std::vector<Vec2> residual;       // sum over incident edges of s_ij (v_j - v_i)
  double max_norm = 0.0;
  double scale = 0.0;               // max |s| times max edge length

  // max_norm / scale, or max_norm when the scale is zero.
  double relative() const { return scale > 0.0 ? max_norm / scale : max_norm; }
};

EquilibriumResidual equilibrium_residual(const Framework& fw, std::span<const double> s);

struct SpiderWebResult {
  bool feasible = false;
  std::vector<double> stress;  // every entry >= 1 when feasible
  bool verified = false;       // LP verdict checked in exact arithmetic
  std::optional<lp::Certificate> certificate;
};

/// Looks for s >= 1 on every edge with equilibrium at every unpinned vertex.
/// A framework without edges is reported infeasible.
SpiderWebResult spider_web_lp(const Framework& fw);

/// Bar network with per-edge rest length, spring constant and presence flag.
struct HookeNetwork {
  Framework framework;
  std::vector<double> rest_length;
  std::vector<double> spring;
  std::vector<char> present;  // empty means every bond is present
};

void validate(const HookeNetwork& net);

// Half the sum over ordered pairs of a n (l - l0)^2, so each bond
// contributes a (l - l0)^2.
double hooke_energy(const HookeNetwork& net, std::span<const Point> positions);

/// n x n rhombic patch of the triangular lattice with vertex (i, j) at
/// (i + j/2, j sqrt(3)/2). Vertices on the patch boundary are pinned; edges
/// with an unpinned endpoint are kept when their uniform draw is below p,
/// and edges between two pinned vertices are omitted. The draws do not
/// depend on p, so patches for different p with the same seed are nested.
Framework triangular_lattice(int n, double p, std::uint64_t seed);

std::string framework_to_json(const Framework& fw);
Framework framework_from_json(const std::string& text);
void write_framework(const Framework& fw, const std::filesystem::path& path);
Framework read_framework(const std::filesystem::path& path);

}  // namespace membrane
