#include "slscover/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

namespace slscover::cli {

using nlohmann::json;

SeedRange parse_seed_range(const std::string& text) {
  const auto parse_one = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError("seeds: cannot parse '" + text + "' (expected N or A-B)");
    }
    return v;
  };
  const std::size_t dash = text.find('-');
  if (dash == std::string::npos) {
    const std::uint64_t v = parse_one(text);
    return {v, v};
  }
  const std::string_view view(text);
  SeedRange r{parse_one(view.substr(0, dash)), parse_one(view.substr(dash + 1))};
  if (r.last < r.first) throw ConfigError("seeds: range '" + text + "' is empty");
  return r;
}

std::optional<Mode> parse_mode(const std::string& text) {
  if (text == "scp") return Mode::Scp;
  if (text == "cp2") return Mode::Cp2;
  return std::nullopt;
}

std::string to_string(Mode mode) { return mode == Mode::Scp ? "scp" : "cp2"; }

void RunConfig::validate() const {
  if (command == "generate") {
    if (n < 1) throw ConfigError("n: must be at least 1");
    if (family != "scp" && family != "cp2") throw ConfigError("family: expected scp or cp2");
    if (nu && *nu < 2) throw ConfigError("nu: must be at least 2");
    if (!(0.1 < r_min && r_min < r_max && r_max < 0.2)) {
      throw ConfigError("r_min, r_max: need 0.1 < r_min < r_max < 0.2");
    }
    if (ell && !(*ell >= 0.0)) throw ConfigError("ell: must be nonnegative");
  }
  if (command == "solve") {
    if (instances.empty()) throw ConfigError("instances: no instance files given");
    if (!(sf_budget >= 0.0 && sf_budget <= 1.0)) {
      throw ConfigError("sf_budget: must be a fraction in [0, 1]");
    }
    if (!(time_limit >= 0.0)) throw ConfigError("time_limit: must be nonnegative");
    if (jobs < 1) throw ConfigError("jobs: must be at least 1");
    if (ell && !(*ell >= 0.0)) throw ConfigError("ell: must be nonnegative");
  }
}

int RunConfig::resolved_nu() const {
  if (nu) return *nu;
  const double ratio = family == "cp2" ? 0.5 : 0.03;
  return std::max(3, static_cast<int>(std::lround(ratio * n)));
}

double RunConfig::resolved_ell() const {
  if (ell) return *ell;
  return family == "cp2" ? 0.05 : 0.0;
}

namespace {

void type_error(const std::string& key, const char* expected) {
  throw ConfigError("config key '" + key + "': expected " + expected);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) type_error(key, "a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) type_error(key, "a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) type_error(key, "an integer");
  return v.get<int>();
}

}  // namespace

void apply_config_json(RunConfig& c, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  for (const auto& [key, v] : doc.items()) {
    if (key == "output_dir") {
      c.output_dir = as_string(v, key);
    } else if (key == "instances") {
      if (!v.is_array()) type_error(key, "an array of paths");
      c.instances.clear();
      for (const json& p : v) c.instances.emplace_back(as_string(p, key));
    } else if (key == "family") {
      c.family = as_string(v, key);
    } else if (key == "n") {
      c.n = as_int(v, key);
    } else if (key == "nu") {
      c.nu = as_int(v, key);
    } else if (key == "r_min") {
      c.r_min = as_number(v, key);
    } else if (key == "r_max") {
      c.r_max = as_number(v, key);
    } else if (key == "ell") {
      c.ell = as_number(v, key);
    } else if (key == "seeds") {
      if (v.is_number_integer()) {
        const auto s = v.get<std::uint64_t>();
        c.seeds = {s, s};
      } else {
        c.seeds = parse_seed_range(as_string(v, key));
      }
    } else if (key == "mode") {
      const auto m = parse_mode(as_string(v, key));
      if (!m) type_error(key, "\"scp\" or \"cp2\"");
      c.mode = *m;
    } else if (key == "presolve") {
      const auto p = scp::parse_presolve_level(as_string(v, key));
      if (!p) type_error(key, "\"none\", \"rc\" or \"strong\"");
      c.presolve = *p;
    } else if (key == "sf_budget") {
      c.sf_budget = as_number(v, key);
    } else if (key == "sf_strategy") {
      const auto s = presolve::parse_strategy(as_string(v, key));
      if (!s) type_error(key, "\"all\", \"jaccard\" or \"bestz\"");
      c.sf_strategy = *s;
    } else if (key == "time_limit") {
      c.time_limit = as_number(v, key);
    } else if (key == "compare") {
      if (!v.is_boolean()) type_error(key, "true or false");
      c.compare = v.get<bool>();
    } else if (key == "jobs") {
      c.jobs = as_int(v, key);
    } else {
      throw ConfigError("config key '" + key + "': unknown key");
    }
  }
}

}  // namespace slscover::cli
