#pragma once

#include <optional>
#include <string>
#include <vector>

#include "membrane/closure.hpp"
#include "membrane/growth.hpp"
#include "membrane/lifting.hpp"
#include "membrane/scene.hpp"
#include "membrane/stress.hpp"

namespace membrane {

enum class Layer { Holes, Defects, Cells, Framework, Boxes };

Layer parse_layer(const std::string& text);
// Comma-separated layer names, e.g. "holes,defects".
std::vector<Layer> parse_layers(const std::string& text);
std::string to_string(Layer layer);

struct RenderSpec {
  std::vector<Layer> layers;
  Window window;               // drawn outline and view box
  std::optional<Window> core;  // dashed outline when set
  double scale = 10.0;         // SVG units per window unit
};

/// Data a render may draw; a requested layer without its data is an error.
struct RenderData {
  std::optional<Scene> scene;            // holes
  std::vector<DefectSet> generations;    // defects, generation 0 first
  std::optional<Subdivision> subdivision;  // cells
  std::optional<Framework> framework;    // edges, widths from stress when present
  std::optional<BoxGrid> boxes;
  std::optional<BoxConfig> box_config;
};

/// Polygons become closed paths. Holes are solid, first-generation defects
/// dashed and later generations dotted; a defect is drawn at the first
/// generation in which it appears; generation 0 is left to the holes layer
/// when both are drawn. Throws Error(MissingLayer) when a
/// requested layer has no data and Error(InvalidArgument) without layers.
std::string svg_render(const RenderSpec& spec, const RenderData& data);

}  // namespace membrane
