#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapeopt/curve.hpp"
#include "shapeopt/solver.hpp"

namespace shapeopt {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Mantissa in [0.1, 1) with four digits and a signed two-digit exponent,
/// e.g. 0.9222E+00.
std::string format_fortran_e(double value);

// Curve files: CSV with one "x,y" row per node (an optional "x,y" header is
// accepted on read) or JSON {"nodes": [[x, y], ...]}. Reading throws
// InvalidInput on malformed content.
std::string curve_to_csv(std::span<const Vec2> nodes);
std::vector<Vec2> curve_from_csv(const std::string& text);
nlohmann::json curve_to_json(std::span<const Vec2> nodes);
std::vector<Vec2> curve_from_json(const nlohmann::json& doc);

/// Picks the format from the extension (.json, otherwise CSV).
std::vector<Vec2> read_curve_file(const std::filesystem::path& path);
void write_curve_file(const std::filesystem::path& path, std::span<const Vec2> nodes);

/// Columns k,f,distance,alpha,step_norm,contraction_ratio,quadratic_ratio;
/// absent values are empty cells.
std::string records_to_csv(const std::vector<IterationRecord>& records);
nlohmann::json records_to_json(const std::vector<IterationRecord>& records);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace shapeopt
