#pragma once

// Internal helpers shared by the file-format readers and writers.

#include <string>

#include "json.hpp"

namespace membrane {
struct Scene;
}

namespace membrane::detail {

using json = nlohmann::json;

// Decimal with 17 significant digits; parses back to the identical double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Parses text, converting syntax errors into Error(ParseError) with a
// line/column diagnostic.
json parse_json(const std::string& text);

const json& require_field(const json& obj, const char* key, const std::string& path);
double require_number(const json& value, const std::string& path);
long long require_integer(const json& value, const std::string& path);
const json& require_array(const json& value, const std::string& path);
struct XY {
  double x;
  double y;
};
XY require_pair(const json& value, const std::string& path);

// Scene document body without the enclosing braces, so other writers can
// append extension fields.
std::string scene_fields(const Scene& scene);
Scene scene_from_value(const json& doc);

}  // namespace membrane::detail
