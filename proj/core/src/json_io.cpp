#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "membrane/error.hpp"

namespace membrane::detail {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep a fractional marker so readers see a floating-point literal.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for '" + path + "'");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + " column " + std::to_string(col) + ": " + e.what());
  }
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  const std::string where = path.empty() ? key : path + "." + key;
  if (!obj.is_object()) throw Error(ErrorCode::ParseError, "field '" + path + "' must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ParseError, "missing field '" + where + "'");
  return *it;
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw Error(ErrorCode::ParseError, "field '" + path + "' must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "field '" + path + "' is not finite");
  return v;
}

long long require_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::ParseError, "field '" + path + "' must be an integer");
  }
  return value.get<long long>();
}

const json& require_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw Error(ErrorCode::ParseError, "field '" + path + "' must be an array");
  return value;
}

XY require_pair(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    throw Error(ErrorCode::ParseError, "field '" + path + "' must be a [x, y] pair");
  }
  return {require_number(value[0], path + "[0]"), require_number(value[1], path + "[1]")};
}

}  // namespace membrane::detail
