#include "delone/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "delone/error.hpp"

namespace delone {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json vec_to_json(Vec v, int dim) {
  return dim == 1 ? nlohmann::json::array({v.x}) : nlohmann::json::array({v.x, v.y});
}

namespace {

void put_point(std::ostringstream& os, Vec p, int dim) {
  os << '[' << format_double(p.x);
  if (dim == 2) os << ',' << format_double(p.y);
  os << ']';
}

double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::InputError, std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

std::string point_set_to_json(const WindowedDeloneSet& X) {
  // Numbers are written by hand so every coordinate carries 17 significant digits.
  std::ostringstream os;
  os << "{\"dim\":" << X.dim() << ",\"window_radius\":" << format_double(X.window_radius());
  if (auto r = X.r_declared()) os << ",\"r\":" << format_double(*r);
  if (auto R = X.R_declared()) os << ",\"R\":" << format_double(*R);
  os << ",\"meta\":" << X.meta().dump() << ",\n\"points\":[";
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (i) os << (i % 8 ? "," : ",\n");
    put_point(os, X.point(i), X.dim());
  }
  os << ']';
  if (X.has_labels()) {
    os << ",\n\"labels\":[";
    for (std::size_t i = 0; i < X.size(); ++i) os << (i ? "," : "") << X.label(i);
    os << ']';
  }
  os << "}\n";
  return os.str();
}

WindowedDeloneSet point_set_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::InputError, "point set must be a JSON object");
    for (const char* key : {"dim", "window_radius", "points"})
      if (!j.contains(key)) throw Error(ErrorCode::InputError, std::string("point set lacks \"") + key + "\"");
    if (!j["dim"].is_number_integer()) throw Error(ErrorCode::InputError, "\"dim\" must be an integer");
    const int dim = j["dim"].get<int>();
    if (dim != 1 && dim != 2) throw Error(ErrorCode::UnsupportedDimension, "dimension " + std::to_string(dim));
    const double W = number(j["window_radius"], "window_radius");
    if (!j["points"].is_array()) throw Error(ErrorCode::InputError, "\"points\" must be an array");
    std::vector<Vec> pts;
    pts.reserve(j["points"].size());
    for (const auto& p : j["points"]) {
      if (!p.is_array() || static_cast<int>(p.size()) != dim)
        throw Error(ErrorCode::InputError, "every point needs " + std::to_string(dim) + " coordinates");
      pts.push_back({number(p[0], "coordinate"), dim == 2 ? number(p[1], "coordinate") : 0.0});
    }
    WindowedDeloneSet::Options opt;
    if (j.contains("labels") && !j["labels"].is_null()) opt.labels = j["labels"].get<std::vector<int>>();
    if (j.contains("r") && !j["r"].is_null()) opt.r_declared = number(j["r"], "r");
    if (j.contains("R") && !j["R"].is_null()) opt.R_declared = number(j["R"], "R");
    if (j.contains("meta")) opt.meta = j["meta"];
    return WindowedDeloneSet::build(std::move(pts), dim, W, std::move(opt));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InputError, std::string("malformed point set: ") + ex.what());
  }
}

std::string point_set_to_csv(const WindowedDeloneSet& X) {
  std::ostringstream os;
  os << "# dim=" << X.dim() << '\n' << "# window_radius=" << format_double(X.window_radius()) << '\n';
  if (auto r = X.r_declared()) os << "# r=" << format_double(*r) << '\n';
  if (auto R = X.R_declared()) os << "# R=" << format_double(*R) << '\n';
  os << "# meta=" << X.meta().dump() << '\n';
  os << (X.dim() == 1 ? "x" : "x,y") << (X.has_labels() ? ",label" : "") << '\n';
  for (std::size_t i = 0; i < X.size(); ++i) {
    os << format_double(X.point(i).x);
    if (X.dim() == 2) os << ',' << format_double(X.point(i).y);
    if (X.has_labels()) os << ',' << X.label(i);
    os << '\n';
  }
  return os.str();
}

WindowedDeloneSet point_set_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = 0;
  std::optional<double> W;
  WindowedDeloneSet::Options opt;
  std::vector<Vec> pts;
  bool labeled = false, header_seen = false;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& what) {
    return Error(ErrorCode::InputError, "CSV line " + std::to_string(lineno) + ": " + what);
  };
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw bad("trailing characters in '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw bad("not a number: '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string val = line.substr(eq + 1);
      if (key == "dim") dim = static_cast<int>(to_double(val));
      else if (key == "window_radius") W = to_double(val);
      else if (key == "r") opt.r_declared = to_double(val);
      else if (key == "R") opt.R_declared = to_double(val);
      else if (key == "meta") {
        try {
          opt.meta = nlohmann::json::parse(val);
        } catch (const nlohmann::json::exception&) {
          throw bad("meta is not JSON");
        }
      }
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    if (!header_seen && !cols.empty() && cols[0] == "x") {
      header_seen = true;
      labeled = cols.back() == "label";
      continue;
    }
    if (dim != 1 && dim != 2) throw bad("missing or unsupported '# dim=' header");
    const std::size_t want = static_cast<std::size_t>(dim) + (labeled ? 1 : 0);
    if (cols.size() != want) throw bad("expected " + std::to_string(want) + " columns");
    pts.push_back({to_double(cols[0]), dim == 2 ? to_double(cols[1]) : 0.0});
    if (labeled) opt.labels.push_back(static_cast<int>(to_double(cols.back())));
  }
  if (!W) throw Error(ErrorCode::InputError, "CSV lacks '# window_radius=' header");
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InputError, "CSV lacks '# dim=' header");
  return WindowedDeloneSet::build(std::move(pts), dim, *W, std::move(opt));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InputError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::InputError, "write failed for " + path);
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

nlohmann::json read_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::InputError, path + ": " + ex.what());
  }
}

void write_point_set(const std::string& path, const WindowedDeloneSet& X) {
  write_text_file(path, ends_with(path, ".csv") ? point_set_to_csv(X) : point_set_to_json(X));
}

WindowedDeloneSet read_point_set(const std::string& path) {
  if (ends_with(path, ".csv")) return point_set_from_csv(slurp(path));
  return point_set_from_json(read_json_file(path));
}

nlohmann::json atlas_to_json(const Atlas& atlas, int dim) {
  nlohmann::json classes = nlohmann::json::array();
  for (const PatchClass& c : atlas.classes()) {
    nlohmann::json e;
    e["key"] = c.quantized_key;
    e["offsets"] = nlohmann::json::array();
    for (const Vec& o : c.representative.offsets) e["offsets"].push_back(vec_to_json(o, dim));
    if (c.representative.labeled()) e["labels"] = c.representative.labels;
    e["center"] = vec_to_json(c.representative.center, dim);
    e["multiplicity"] = c.multiplicity;
    classes.push_back(std::move(e));
  }
  return {{"R", atlas.radius},
          {"equivalence", to_string(atlas.equivalence())},
          {"valid_region_radius", atlas.valid_region_radius},
          {"class_count", atlas.size()},
          {"classes", classes}};
}

}  // namespace delone
