#include "membrane/stress.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "membrane/error.hpp"
#include "membrane/rng.hpp"

namespace membrane {

std::vector<bool> Framework::pinned_mask() const {
  std::vector<bool> mask(vertices.size(), false);
  for (std::size_t v : pinned) {
    if (v < mask.size()) mask[v] = true;
  }
  return mask;
}

double Framework::max_edge_length() const {
  double m = 0.0;
  for (const auto& [u, v] : edges) m = std::max(m, norm(vertices[v] - vertices[u]));
  return m;
}

void validate(const Framework& fw) {
  const std::size_t n = fw.vertices.size();
  for (const Point& p : fw.vertices) {
    if (!is_finite(p)) throw Error(ErrorCode::InvalidArgument, "framework vertex is not finite");
  }
  std::set<Edge> seen;
  for (const auto& [u, v] : fw.edges) {
    if (u >= n || v >= n) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop at vertex " + std::to_string(u));
    if (fw.vertices[u] == fw.vertices[v]) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoints coincide");
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw Error(ErrorCode::InvalidArgument,
                  "duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
  }
  for (std::size_t v : fw.pinned) {
    if (v >= n) throw Error(ErrorCode::InvalidArgument, "pinned index out of range");
  }
  if (!fw.stress.empty() && fw.stress.size() != fw.edges.size()) {
    throw Error(ErrorCode::InvalidArgument, "stress needs one value per edge");
  }
  for (double s : fw.stress) {
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "stress is not finite");
  }
}

EquilibriumResidual equilibrium_residual(const Framework& fw, std::span<const double> s) {
  if (s.size() != fw.edges.size()) {
    throw Error(ErrorCode::InvalidArgument, "stress needs one value per edge");
  }
  const std::vector<bool> pinned = fw.pinned_mask();
  std::vector<Vec2> acc(fw.vertices.size());
  double smax = 0.0;
  for (std::size_t e = 0; e < fw.edges.size(); ++e) {
    const auto [u, v] = fw.edges[e];
    const Vec2 d = fw.vertices[v] - fw.vertices[u];
    acc[u] = acc[u] + s[e] * d;
    acc[v] = acc[v] - s[e] * d;
    smax = std::max(smax, std::abs(s[e]));
  }
  EquilibriumResidual out;
  for (std::size_t i = 0; i < fw.vertices.size(); ++i) {
    if (pinned[i]) continue;
    out.vertex.push_back(i);
    out.residual.push_back(acc[i]);
    out.max_norm = std::max(out.max_norm, norm(acc[i]));
  }
  out.scale = smax * fw.max_edge_length();
  return out;
}

SpiderWebResult spider_web_lp(const Framework& fw) {
  validate(fw);
  SpiderWebResult out;
  if (fw.edges.empty()) return out;

  // s_e = 1 + t_e with t_e >= 0; two equality rows per unpinned vertex.
  const std::vector<bool> pinned = fw.pinned_mask();
  std::vector<std::vector<std::pair<std::size_t, Vec2>>> incident(fw.vertices.size());
  for (std::size_t e = 0; e < fw.edges.size(); ++e) {
    const auto [u, v] = fw.edges[e];
    const Vec2 d = fw.vertices[v] - fw.vertices[u];
    incident[u].push_back({e, d});
    incident[v].push_back({e, -1.0 * d});
  }
  lp::Problem problem;
  problem.num_vars = fw.edges.size();
  for (std::size_t i = 0; i < fw.vertices.size(); ++i) {
    if (pinned[i] || incident[i].empty()) continue;
    lp::Row rx{{}, lp::RowKind::Equal, 0.0};
    lp::Row ry{{}, lp::RowKind::Equal, 0.0};
    for (const auto& [e, d] : incident[i]) {
      rx.coeffs.push_back({e, d.x});
      ry.coeffs.push_back({e, d.y});
      rx.rhs -= d.x;
      ry.rhs -= d.y;
    }
    problem.add_row(std::move(rx));
    problem.add_row(std::move(ry));
  }
  const lp::Result res = lp::solve(problem);
  out.feasible = res.feasible;
  out.verified = res.verified;
  out.certificate = res.certificate;
  if (res.feasible) {
    out.stress.resize(fw.edges.size());
    for (std::size_t e = 0; e < fw.edges.size(); ++e) out.stress[e] = 1.0 + std::max(0.0, res.x[e]);
  }
  return out;
}

void validate(const HookeNetwork& net) {
  validate(net.framework);
  const std::size_t m = net.framework.edges.size();
  if (net.rest_length.size() != m || net.spring.size() != m ||
      (!net.present.empty() && net.present.size() != m)) {
    throw Error(ErrorCode::InvalidArgument, "network needs one rest length and spring constant per edge");
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (!(net.rest_length[e] > 0.0) || !(net.spring[e] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "rest lengths and spring constants must be positive");
    }
  }
}

double hooke_energy(const HookeNetwork& net, std::span<const Point> positions) {
  validate(net);
  if (positions.size() != net.framework.vertices.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one position per vertex");
  }
  double sum = 0.0;
  for (std::size_t e = 0; e < net.framework.edges.size(); ++e) {
    if (!net.present.empty() && !net.present[e]) continue;
    const auto [u, v] = net.framework.edges[e];
    const double dl = norm(positions[v] - positions[u]) - net.rest_length[e];
    // (i,j) and (j,i) both appear in the ordered sum.
    sum += 2.0 * net.spring[e] * dl * dl;
  }
  return 0.5 * sum;
}

Framework triangular_lattice(int n, double p, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "lattice size must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  Framework fw;
  const double h = std::sqrt(3.0) / 2.0;
  auto index = [n](int i, int j) { return static_cast<std::size_t>(j * n + i); };
  auto on_boundary = [n](int i, int j) { return i == 0 || j == 0 || i == n - 1 || j == n - 1; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      fw.vertices.push_back({i + 0.5 * j, h * j});
      if (on_boundary(i, j)) fw.pinned.push_back(index(i, j));
    }
  }
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int dirs[3][2] = {{1, 0}, {0, 1}, {-1, 1}};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (const auto& d : dirs) {
        const int i2 = i + d[0];
        const int j2 = j + d[1];
        if (i2 < 0 || i2 >= n || j2 >= n) continue;
        const double u = unif(rng);
        if (on_boundary(i, j) && on_boundary(i2, j2)) continue;
        if (u < p) fw.edges.push_back({index(i, j), index(i2, j2)});
      }
    }
  }
  return fw;
}

std::string framework_to_json(const Framework& fw) {
  using detail::format_double;
  std::ostringstream out;
  out << "{\n  \"vertices\": [";
  for (std::size_t i = 0; i < fw.vertices.size(); ++i) {
    out << (i ? ", " : "") << "[" << format_double(fw.vertices[i].x) << ", "
        << format_double(fw.vertices[i].y) << "]";
  }
  out << "],\n  \"edges\": [";
  for (std::size_t e = 0; e < fw.edges.size(); ++e) {
    out << (e ? ", " : "") << "[" << fw.edges[e].first << ", " << fw.edges[e].second << "]";
  }
  out << "],\n  \"pinned\": [";
  for (std::size_t i = 0; i < fw.pinned.size(); ++i) out << (i ? ", " : "") << fw.pinned[i];
  out << "]";
  if (!fw.stress.empty()) {
    out << ",\n  \"stress\": [";
    for (std::size_t e = 0; e < fw.stress.size(); ++e) out << (e ? ", " : "") << format_double(fw.stress[e]);
    out << "]";
  }
  out << "\n}\n";
  return out.str();
}

Framework framework_from_json(const std::string& text) {
  using namespace detail;
  const json doc = parse_json(text);
  Framework fw;
  const json& vs = require_array(require_field(doc, "vertices", ""), "vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const XY p = require_pair(vs[i], "vertices[" + std::to_string(i) + "]");
    fw.vertices.push_back({p.x, p.y});
  }
  auto index = [&](const json& v, const std::string& path) {
    const long long k = require_integer(v, path);
    if (k < 0) throw Error(ErrorCode::ParseError, "field '" + path + "' must be non-negative");
    return static_cast<std::size_t>(k);
  };
  const json& es = require_array(require_field(doc, "edges", ""), "edges");
  for (std::size_t e = 0; e < es.size(); ++e) {
    const std::string path = "edges[" + std::to_string(e) + "]";
    const json& pair = require_array(es[e], path);
    if (pair.size() != 2) throw Error(ErrorCode::ParseError, "field '" + path + "' must hold two indices");
    fw.edges.push_back({index(pair[0], path + "[0]"), index(pair[1], path + "[1]")});
  }
  const json& ps = require_array(require_field(doc, "pinned", ""), "pinned");
  for (std::size_t i = 0; i < ps.size(); ++i) fw.pinned.push_back(index(ps[i], "pinned[" + std::to_string(i) + "]"));
  if (doc.contains("stress")) {
    const json& ss = require_array(doc["stress"], "stress");
    for (std::size_t e = 0; e < ss.size(); ++e) {
      fw.stress.push_back(require_number(ss[e], "stress[" + std::to_string(e) + "]"));
    }
  }
  try {
    validate(fw);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return fw;
}

void write_framework(const Framework& fw, const std::filesystem::path& path) {
  detail::write_text_file(path.string(), framework_to_json(fw));
}

Framework read_framework(const std::filesystem::path& path) {
  return framework_from_json(detail::read_text_file(path.string()));
}

}  // namespace membrane
