#include "slscover/solution_io.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace slscover::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!obj.is_object()) throw SchemaError("'" + where + "': expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing key '" + path + "'");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError("key '" + (where.empty() ? key : where + "." + key) +
                                        "': expected a number");
  return v.get<double>();
}

long integer(const json& obj, const std::string& key, const std::string& where = "") {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError("key '" + (where.empty() ? key : where + "." + key) +
                      "': expected an integer");
  }
  return v.get<long>();
}

bool boolean(const json& obj, const std::string& key) {
  const json& v = require(obj, key, "");
  if (!v.is_boolean()) throw SchemaError("key '" + key + "': expected true or false");
  return v.get<bool>();
}

const json& array(const json& obj, const std::string& key) {
  const json& v = require(obj, key, "");
  if (!v.is_array()) throw SchemaError("key '" + key + "': expected an array");
  return v;
}

void expect_kind(const json& doc, const char* kind) {
  const json& v = require(doc, "kind", "");
  if (!v.is_string() || v.get<std::string>() != kind) {
    throw SchemaError(std::string("key 'kind': expected \"") + kind + "\"");
  }
}

}  // namespace

std::string to_json(const scp::CoverSolution& sol) {
  ordered_json doc;
  doc["kind"] = "scp";
  doc["objective"] = sol.objective;
  doc["columns"] = sol.columns;
  doc["proved_optimal"] = sol.proved_optimal;
  doc["stats"] = {{"nodes", sol.stats.nodes},
                  {"lp_solves", sol.stats.lp_solves},
                  {"presolve_seconds", sol.stats.presolve_seconds},
                  {"bnb_seconds", sol.stats.bnb_seconds},
                  {"total_seconds", sol.stats.total_seconds}};
  return doc.dump(1) + "\n";
}

std::string to_json(const cp2::Cp2Solution& sol) {
  ordered_json doc;
  doc["kind"] = "cp2";
  doc["objective"] = sol.objective;
  ordered_json sites = ordered_json::array();
  for (int j : sol.sites) {
    const Point2 c = sol.centers.at(j);
    sites.push_back({{"j", j}, {"x", {c.x, c.y}}});
  }
  doc["sites"] = std::move(sites);
  ordered_json assignments = ordered_json::array();
  for (const cp2::Assignment& a : sol.assignments) {
    assignments.push_back({{"edge", a.edge}, {"site", a.site}});
  }
  doc["assignments"] = std::move(assignments);
  doc["proved_optimal"] = sol.proved_optimal;
  doc["stats"] = {{"nodes", sol.stats.nodes},
                  {"lp_solves", sol.stats.lp_solves},
                  {"cuts", sol.stats.cuts},
                  {"seconds", sol.stats.seconds}};
  return doc.dump(1) + "\n";
}

std::string to_json(const presolve::FixingLedger& ledger) {
  ordered_json entries = ordered_json::array();
  for (const presolve::FixEntry& e : ledger.entries()) {
    entries.push_back({{"column", e.column},
                       {"value", e.value},
                       {"rule", std::string(presolve::to_string(e.rule))},
                       {"bound", std::isfinite(e.bound) ? ordered_json(e.bound) : ordered_json()},
                       {"ub", e.ub},
                       {"source", e.source}});
  }
  ordered_json doc;
  doc["entries"] = std::move(entries);
  return doc.dump(1) + "\n";
}

std::string solution_kind(const std::string& text) {
  const json doc = parse(text);
  const json& v = require(doc, "kind", "");
  if (!v.is_string()) throw SchemaError("key 'kind': expected a string");
  const std::string kind = v.get<std::string>();
  if (kind != "scp" && kind != "cp2") throw SchemaError("key 'kind': unknown kind '" + kind + "'");
  return kind;
}

scp::CoverSolution cover_solution_from_json(const std::string& text) {
  const json doc = parse(text);
  expect_kind(doc, "scp");
  scp::CoverSolution sol;
  sol.objective = number(doc, "objective");
  for (const json& c : array(doc, "columns")) {
    if (!c.is_number_integer() || c.get<long>() < 0) {
      throw SchemaError("key 'columns': expected nonnegative integers");
    }
    sol.columns.push_back(c.get<int>());
  }
  sol.proved_optimal = boolean(doc, "proved_optimal");
  const json& stats = require(doc, "stats", "");
  sol.stats.nodes = integer(stats, "nodes", "stats");
  sol.stats.lp_solves = integer(stats, "lp_solves", "stats");
  sol.stats.presolve_seconds = number(stats, "presolve_seconds", "stats");
  sol.stats.bnb_seconds = number(stats, "bnb_seconds", "stats");
  sol.stats.total_seconds = number(stats, "total_seconds", "stats");
  return sol;
}

cp2::Cp2Solution cp2_solution_from_json(const std::string& text, const Cp2Instance& inst) {
  const json doc = parse(text);
  expect_kind(doc, "cp2");
  cp2::Cp2Solution sol;
  sol.objective = number(doc, "objective");
  sol.centers = inst.site_points;
  for (const json& s : array(doc, "sites")) {
    const long j = integer(s, "j", "sites[]");
    if (j < 0 || j >= inst.num_sites()) throw SchemaError("key 'sites[].j': site out of range");
    const json& x = require(s, "x", "sites[]");
    if (!x.is_array() || x.size() != 2 || !x[0].is_number() || !x[1].is_number()) {
      throw SchemaError("key 'sites[].x': expected [x, y]");
    }
    sol.sites.push_back(static_cast<int>(j));
    sol.centers[j] = {x[0].get<double>(), x[1].get<double>()};
  }
  for (const json& a : array(doc, "assignments")) {
    sol.assignments.push_back({static_cast<int>(integer(a, "edge", "assignments[]")),
                               static_cast<int>(integer(a, "site", "assignments[]"))});
  }
  sol.proved_optimal = boolean(doc, "proved_optimal");
  const json& stats = require(doc, "stats", "");
  sol.stats.nodes = integer(stats, "nodes", "stats");
  sol.stats.lp_solves = integer(stats, "lp_solves", "stats");
  sol.stats.cuts = integer(stats, "cuts", "stats");
  sol.stats.seconds = number(stats, "seconds", "stats");
  return sol;
}

presolve::FixingLedger ledger_from_json(const std::string& text) {
  const json doc = parse(text);
  presolve::FixingLedger ledger;
  for (const json& e : array(doc, "entries")) {
    presolve::FixEntry entry;
    entry.column = static_cast<int>(integer(e, "column", "entries[]"));
    entry.value = static_cast<int>(integer(e, "value", "entries[]"));
    const json& rule = require(e, "rule", "entries[]");
    bool known = false;
    for (presolve::FixRule r : {presolve::FixRule::RC0, presolve::FixRule::DPlus1,
                                presolve::FixRule::SF0, presolve::FixRule::SF1,
                                presolve::FixRule::Propagation}) {
      if (rule.is_string() && rule.get<std::string>() == presolve::to_string(r)) {
        entry.rule = r;
        known = true;
      }
    }
    if (!known) throw SchemaError("key 'entries[].rule': unknown rule");
    // An infinite bound (the subproblem was unbounded) is stored as null.
    const json& bound = require(e, "bound", "entries[]");
    entry.bound = bound.is_null() ? std::numeric_limits<double>::infinity()
                                  : number(e, "bound", "entries[]");
    entry.ub = number(e, "ub", "entries[]");
    entry.source = static_cast<int>(integer(e, "source", "entries[]"));
    try {
      ledger.record(entry);
    } catch (const presolve::LedgerConflict& c) {
      throw SchemaError(std::string("key 'entries': ") + c.what());
    }
  }
  return ledger;
}

}  // namespace slscover::io
