#include "shapeopt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& token, std::size_t line) {
  const std::string t = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw InvalidInput("line " + std::to_string(line) + ": cannot parse '" + t + "' as a number");
  }
  return value;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string format_fortran_e(double value) {
  if (value == 0.0 || !std::isfinite(value)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4E", value);
    return value == 0.0 ? "0.0000E+00" : buf;
  }
  int exponent = static_cast<int>(std::floor(std::log10(std::abs(value)))) + 1;
  double mantissa = value / std::pow(10.0, exponent);
  // Rounding to four digits can carry into the next decade.
  if (std::abs(std::round(mantissa * 1e4)) >= 1e4) {
    mantissa /= 10.0;
    ++exponent;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4fE%c%02d", mantissa, exponent < 0 ? '-' : '+', std::abs(exponent));
  return buf;
}

std::string curve_to_csv(std::span<const Vec2> nodes) {
  std::string out = "x,y\n";
  for (const Vec2& p : nodes) out += format_double(p.x()) + "," + format_double(p.y()) + "\n";
  return out;
}

std::vector<Vec2> curve_from_csv(const std::string& text) {
  std::vector<Vec2> nodes;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw InvalidInput("line " + std::to_string(line_no) + ": expected 'x,y'");
    if (nodes.empty() && trim(t.substr(0, comma)) == "x") continue;
    nodes.emplace_back(parse_double(t.substr(0, comma), line_no), parse_double(t.substr(comma + 1), line_no));
  }
  return nodes;
}

nlohmann::json curve_to_json(std::span<const Vec2> nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Vec2& p : nodes) arr.push_back({p.x(), p.y()});
  return nlohmann::json{{"nodes", arr}};
}

std::vector<Vec2> curve_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw InvalidInput("curve JSON must be an object with a \"nodes\" array");
  }
  std::vector<Vec2> nodes;
  for (const auto& p : doc["nodes"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InvalidInput("each curve node must be a [x, y] number pair");
    }
    nodes.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return nodes;
}

std::vector<Vec2> read_curve_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") {
    try {
      return curve_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(path.string() + ": " + e.what());
    }
  }
  return curve_from_csv(text);
}

void write_curve_file(const std::filesystem::path& path, std::span<const Vec2> nodes) {
  if (path.extension() == ".json") {
    write_text_file(path, curve_to_json(nodes).dump(2) + "\n");
  } else {
    write_text_file(path, curve_to_csv(nodes));
  }
}

std::string records_to_csv(const std::vector<IterationRecord>& records) {
  std::string out = "k,f,distance,alpha,step_norm,contraction_ratio,quadratic_ratio\n";
  for (const IterationRecord& r : records) {
    out += std::to_string(r.index) + "," + format_double(r.objective) + "," + optional_cell(r.distance) + "," +
           optional_cell(r.step_scale) + "," + format_double(r.step_norm) + "," +
           optional_cell(r.contraction_ratio) + "," + optional_cell(r.quadratic_ratio) + "\n";
  }
  return out;
}

nlohmann::json records_to_json(const std::vector<IterationRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const IterationRecord& r : records) {
    arr.push_back({{"k", r.index},
                   {"f", r.objective},
                   {"distance", optional_json(r.distance)},
                   {"alpha", optional_json(r.step_scale)},
                   {"step_norm", r.step_norm},
                   {"contraction_ratio", optional_json(r.contraction_ratio)},
                   {"quadratic_ratio", optional_json(r.quadratic_ratio)}});
  }
  return arr;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw InvalidInput("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shapeopt
