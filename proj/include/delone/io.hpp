#pragma once

#include <string>

#include "delone/atlas.hpp"
#include "delone/point_set.hpp"
#include "json.hpp"

namespace delone {

/// Shortest text that reads back to the same double: 17 significant digits.
std::string format_double(double v);

/// Point-set document {"dim", "window_radius", "points", "labels"?, "r"?, "R"?, "meta"}.
std::string point_set_to_json(const WindowedDeloneSet& X);
/// Throws InputError on malformed documents; model errors (DuplicatePoints, ...) pass through.
WindowedDeloneSet point_set_from_json(const nlohmann::json& j);

/// CSV: `# key=value` header lines (dim, window_radius, r, R, meta), then
/// one point per row with the label as the last column when labeled.
std::string point_set_to_csv(const WindowedDeloneSet& X);
WindowedDeloneSet point_set_from_csv(const std::string& text);

/// Format by extension: .csv is CSV, anything else JSON.
void write_point_set(const std::string& path, const WindowedDeloneSet& X);
WindowedDeloneSet read_point_set(const std::string& path);

/// Throws InputError when the file cannot be read or parsed.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json vec_to_json(Vec v, int dim);

/// {"R", "equivalence", "classes": [{"key", "offsets", "labels"?, "multiplicity"}]}.
nlohmann::json atlas_to_json(const Atlas& atlas, int dim);

}  // namespace delone
