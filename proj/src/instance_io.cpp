#include "slscover/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace slscover {

using nlohmann::json;

std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string point_json(Point2 p) {
  return "[" + format_real(p.x) + "," + format_real(p.y) + "]";
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InstanceError("instance JSON: missing key '" + where + key + "'");
  }
  return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) {
    throw InstanceError("instance JSON: key '" + where + key + "' must be a number");
  }
  return v.get<double>();
}

Point2 parse_point(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InstanceError("instance JSON: key '" + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string to_json(const Cp1Instance& inst) {
  std::ostringstream out;
  out << "{\"version\":" << kInstanceFormatVersion << ",\"seed\":" << inst.seed
      << ",\"params\":{\"n\":" << inst.params.n << ",\"nu\":" << inst.params.nu
      << ",\"r_min\":" << format_real(inst.params.r_min)
      << ",\"r_max\":" << format_real(inst.params.r_max)
      << ",\"ell\":" << format_real(inst.params.ell) << "},\"vertices\":[";
  for (std::size_t i = 0; i < inst.vertices.size(); ++i) {
    out << (i ? "," : "") << point_json(inst.vertices[i]);
  }
  out << "],\"edges\":[";
  for (std::size_t e = 0; e < inst.edges.size(); ++e) {
    out << (e ? "," : "") << "[" << inst.edges[e].first << ","
        << inst.edges[e].second << "]";
  }
  out << "],\"sites\":[";
  for (std::size_t j = 0; j < inst.sites.size(); ++j) {
    const Site& s = inst.sites[j];
    out << (j ? "," : "") << "{\"center\":" << point_json(s.center)
        << ",\"radius\":" << format_real(s.radius)
        << ",\"weight\":" << format_real(s.weight) << "}";
  }
  out << "]}\n";
  return out.str();
}

Cp1Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(std::string("instance JSON: parse error: ") + e.what());
  }
  Cp1Instance inst;
  const double version = require_number(doc, "version", "");
  if (version != kInstanceFormatVersion) {
    throw InstanceError("instance JSON: key 'version' has unsupported value");
  }
  const json& seed = require(doc, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw InstanceError("instance JSON: key 'seed' must be an integer");
  }
  inst.seed = seed.get<std::uint64_t>();

  const json& params = require(doc, "params", "");
  inst.params.n = static_cast<int>(require_number(params, "n", "params."));
  inst.params.nu = static_cast<int>(require_number(params, "nu", "params."));
  inst.params.r_min = require_number(params, "r_min", "params.");
  inst.params.r_max = require_number(params, "r_max", "params.");
  inst.params.ell = require_number(params, "ell", "params.");

  const json& vertices = require(doc, "vertices", "");
  if (!vertices.is_array()) {
    throw InstanceError("instance JSON: key 'vertices' must be an array");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    inst.vertices.push_back(
        parse_point(vertices[i], "vertices[" + std::to_string(i) + "]"));
  }

  const json& edges = require(doc, "edges", "");
  if (!edges.is_array()) {
    throw InstanceError("instance JSON: key 'edges' must be an array");
  }
  const int nv = static_cast<int>(inst.vertices.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const json& ed = edges[e];
    const std::string key = "edges[" + std::to_string(e) + "]";
    if (!ed.is_array() || ed.size() != 2 || !ed[0].is_number_integer() ||
        !ed[1].is_number_integer()) {
      throw InstanceError("instance JSON: key '" + key + "' must be [u, v]");
    }
    const int u = ed[0].get<int>();
    const int v = ed[1].get<int>();
    if (u < 0 || v < 0 || u >= nv || v >= nv || u == v) {
      throw InstanceError("instance JSON: key '" + key +
                          "' references an invalid vertex");
    }
    inst.edges.emplace_back(u, v);
  }

  const json& sites = require(doc, "sites", "");
  if (!sites.is_array()) {
    throw InstanceError("instance JSON: key 'sites' must be an array");
  }
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const std::string where = "sites[" + std::to_string(j) + "].";
    Site s;
    s.center = parse_point(require(sites[j], "center", where), where + "center");
    s.radius = require_number(sites[j], "radius", where);
    s.weight = require_number(sites[j], "weight", where);
    if (!(s.radius > 0.0)) {
      throw InstanceError("instance JSON: key '" + where + "radius' must be > 0");
    }
    if (!(s.weight > 0.0)) {
      throw InstanceError("instance JSON: key '" + where + "weight' must be > 0");
    }
    inst.sites.push_back(s);
  }
  return inst;
}

void write_instance(const std::filesystem::path& path, const Cp1Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot open '" + path.string() + "' for writing");
  out << to_json(inst);
  if (!out) throw InstanceError("write failed for '" + path.string() + "'");
}

Cp1Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json(buf.str());
  } catch (const InstanceError& e) {
    throw InstanceError(path.string() + ": " + e.what());
  }
}

std::string to_scp_text(const ScpInstance& scp) {
  std::ostringstream out;
  out << scp.num_rows() << " " << scp.num_cols() << "\n";
  for (const auto& row : scp.matrix.rows) {
    out << row.size();
    for (int j : row) out << " " << j;
    out << "\n";
  }
  out << "weights\n";
  for (double w : scp.weights) out << format_real(w) << "\n";
  return out.str();
}

ScpInstance scp_from_text(const std::string& text) {
  std::istringstream in(text);
  ScpInstance scp;
  int m = 0;
  int n = 0;
  if (!(in >> m >> n) || m < 0 || n < 0) {
    throw InstanceError("scp text: bad header");
  }
  scp.matrix.num_cols = n;
  for (int i = 0; i < m; ++i) {
    int count = 0;
    if (!(in >> count) || count < 0) {
      throw InstanceError("scp text: bad row " + std::to_string(i));
    }
    std::vector<int> row(count);
    for (int& j : row) {
      if (!(in >> j) || j < 0 || j >= n) {
        throw InstanceError("scp text: bad column in row " + std::to_string(i));
      }
    }
    scp.matrix.rows.push_back(std::move(row));
    scp.origin.push_back({0, i, 0.0, 0.0});
  }
  std::string tag;
  if (!(in >> tag) || tag != "weights") {
    throw InstanceError("scp text: missing 'weights' block");
  }
  scp.weights.resize(n);
  for (double& w : scp.weights) {
    if (!(in >> w)) throw InstanceError("scp text: truncated weights");
  }
  return scp;
}

}  // namespace slscover
