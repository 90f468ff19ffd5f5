#include "membrane/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "membrane/error.hpp"

namespace membrane {

Layer parse_layer(const std::string& text) {
  if (text == "holes") return Layer::Holes;
  if (text == "defects") return Layer::Defects;
  if (text == "cells") return Layer::Cells;
  if (text == "framework") return Layer::Framework;
  if (text == "boxes") return Layer::Boxes;
  throw Error(ErrorCode::InvalidArgument, "unknown layer '" + text + "'");
}

std::vector<Layer> parse_layers(const std::string& text) {
  std::vector<Layer> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_layer(item));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no layers given");
  return out;
}

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::Holes: return "holes";
    case Layer::Defects: return "defects";
    case Layer::Cells: return "cells";
    case Layer::Framework: return "framework";
    case Layer::Boxes: return "boxes";
  }
  return "holes";
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  // Trim trailing zeros for compact, stable output.
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string path(const ConvexPolygon& p) {
  std::string d;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d += (i ? " L " : "M ") + num(p[i].x) + " " + num(p[i].y);
  }
  return d + " Z";
}

const char* generation_class(int g) {
  if (g <= 0) return "gen0";
  if (g == 1) return "gen1";
  return "gen2";
}

void rect_outline(std::ostringstream& out, const Window& w, const char* cls) {
  out << "  <rect class=\"" << cls << "\" x=\"" << num(w.xmin) << "\" y=\"" << num(w.ymin) << "\" width=\""
      << num(w.width()) << "\" height=\"" << num(w.height()) << "\"/>\n";
}

}  // namespace

std::string svg_render(const RenderSpec& spec, const RenderData& data) {
  if (spec.layers.empty()) throw Error(ErrorCode::InvalidArgument, "render needs at least one layer");
  if (!(spec.scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  auto missing = [](Layer l) { throw Error(ErrorCode::MissingLayer, "no data for layer '" + to_string(l) + "'"); };
  for (Layer l : spec.layers) {
    if (l == Layer::Holes && !data.scene) missing(l);
    if (l == Layer::Defects && data.generations.empty()) missing(l);
    if (l == Layer::Cells && !data.subdivision) missing(l);
    if (l == Layer::Framework && !data.framework && !data.subdivision) missing(l);
    if (l == Layer::Boxes && (!data.boxes || !data.box_config)) missing(l);
  }

  const Window& w = spec.window;
  const double s = spec.scale;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w.width() * s) << "\" height=\""
      << num(w.height() * s) << "\" viewBox=\"0 0 " << num(w.width() * s) << " " << num(w.height() * s)
      << "\" data-scale=\"" << num(s) << "\">\n";
  out << "<style>\n"
         "  path, rect, line { fill: none; vector-effect: non-scaling-stroke; stroke-width: 1; }\n"
         "  .window { stroke: #000; }\n"
         "  .core { stroke: #888; stroke-dasharray: 4 4; }\n"
         "  .gen0 { stroke: #000; fill: #ccc; fill-opacity: 0.5; }\n"
         "  .gen1 { stroke: #c00; stroke-dasharray: 6 3; }\n"
         "  .gen2 { stroke: #00c; stroke-dasharray: 1 3; }\n"
         "  .cell { stroke: #2a2; }\n"
         "  .bar { stroke: #a50; }\n"
         "  .box { stroke: #666; }\n"
         "  .box.open { fill: #6a6; fill-opacity: 0.6; }\n"
         "</style>\n";
  // Window coordinates throughout, with y pointing up.
  out << "<g transform=\"matrix(" << num(s) << " 0 0 " << num(-s) << " " << num(-s * w.xmin) << " "
      << num(s * w.ymax) << ")\">\n";
  rect_outline(out, w, "window");
  if (spec.core) rect_outline(out, *spec.core, "core");

  for (Layer l : spec.layers) {
    switch (l) {
      case Layer::Holes:
        out << " <g id=\"holes\">\n";
        for (const Hole& h : data.scene->holes) {
          out << "  <path class=\"gen0\" d=\"" << path(hole_polygon(h, kDefaultDiskResolution)) << "\"/>\n";
        }
        out << " </g>\n";
        break;
      case Layer::Defects: {
        out << " <g id=\"defects\">\n";
        const bool with_holes = std::find(spec.layers.begin(), spec.layers.end(), Layer::Holes) != spec.layers.end();
        const std::vector<ConvexPolygon>* prev = nullptr;
        for (const DefectSet& gen : data.generations) {
          if (gen.generation == 0 && with_holes) {
            prev = &gen.defects;
            continue;
          }
          for (const ConvexPolygon& d : gen.defects) {
            if (prev && std::find(prev->begin(), prev->end(), d) != prev->end()) continue;
            out << "  <path class=\"" << generation_class(gen.generation) << "\" d=\"" << path(d) << "\"/>\n";
          }
          prev = &gen.defects;
        }
        out << " </g>\n";
        break;
      }
      case Layer::Cells:
        out << " <g id=\"cells\">\n";
        for (const ConvexPolygon& c : data.subdivision->cells) {
          out << "  <path class=\"cell\" d=\"" << path(c) << "\"/>\n";
        }
        out << " </g>\n";
        break;
      case Layer::Framework: {
        const Framework& fw = data.framework ? *data.framework : data.subdivision->framework;
        double smax = 0.0;
        for (double v : fw.stress) smax = std::max(smax, std::abs(v));
        out << " <g id=\"framework\">\n";
        for (std::size_t e = 0; e < fw.edges.size(); ++e) {
          const Point a = fw.vertices[fw.edges[e].first];
          const Point b = fw.vertices[fw.edges[e].second];
          const double width = smax > 0.0 ? 0.5 + 3.5 * std::abs(fw.stress[e]) / smax : 1.0;
          out << "  <line class=\"bar\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x)
              << "\" y2=\"" << num(b.y) << "\" style=\"stroke-width: " << num(width) << "\"/>\n";
        }
        out << " </g>\n";
        break;
      }
      case Layer::Boxes: {
        const BoxGrid& grid = *data.boxes;
        const double L = data.box_config->L();
        out << " <g id=\"boxes\">\n";
        for (int j = 0; j < grid.ny; ++j) {
          for (int i = 0; i < grid.nx; ++i) {
            const Window b{i * L, (i + 1) * L, j * L, (j + 1) * L};
            rect_outline(out, b, grid.at(i, j).open ? "box open" : "box");
          }
        }
        out << " </g>\n";
        break;
      }
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace membrane
