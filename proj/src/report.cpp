#include "slscover/report.hpp"

#include <charconv>
#include <type_traits>

#include "slscover/instance_io.hpp"

namespace slscover::report {
namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> cols = {
      "instance", "mode", "m", "n", "solver_original_time",
      "matrix_reduction_m", "matrix_reduction_n", "matrix_reduction_time",
      "reduced_cost_fixing_m", "reduced_cost_fixing_n", "reduced_cost_fixing_time",
      "strong_fixing_m", "strong_fixing_n", "strong_fixing_time",
      "solver_reduced_time", "objective", "proved_optimal",
      "n0_RC", "n0_SF", "n1_SF",
      "V_H", "I_H", "opt_SCP", "opt_CP2", "sum_z_SCP", "sum_z_CP2"};
  return cols;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <class T>
std::string cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>) return format_real(*v);
  else return std::to_string(*v);
}

double parse_double(std::string_view s, const std::string& col) {
  try {
    std::size_t used = 0;
    const std::string text(s);
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw RecordError("column '" + col + "': not a number: '" + std::string(s) + "'");
  }
}

int parse_int(std::string_view s, const std::string& col) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw RecordError("column '" + col + "': not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void BenchRecord::validate() const {
  const auto check_time = [](double t, const char* what) {
    if (!(t >= 0.0)) throw RecordError(std::string("negative time in ") + what);
  };
  if (original_time) check_time(*original_time, "solver_original_time");
  check_time(reduced_time, "solver_reduced_time");
  check_time(reduction.rows_eliminated.seconds, "matrix_reduction_time");
  check_time(reduction.rc_fixed.seconds, "reduced_cost_fixing_time");
  check_time(reduction.strong_fixed.seconds, "strong_fixing_time");
  for (const presolve::StageSize* s :
       {&reduction.rows_eliminated, &reduction.rc_fixed, &reduction.strong_fixed}) {
    if (s->m > reduction.original.m || s->n > reduction.original.n) {
      throw RecordError("reduced size exceeds the original size");
    }
  }
}

std::vector<std::string> csv_columns() { return columns(); }

std::string csv_header() {
  std::string out;
  for (const std::string& c : columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string csv_row(const BenchRecord& r) {
  if (r.instance.find(',') != std::string::npos || r.mode.find(',') != std::string::npos) {
    throw RecordError("instance id and mode must not contain commas");
  }
  const presolve::ReductionReport& red = r.reduction;
  const std::vector<std::string> cells = {
      r.instance, r.mode, std::to_string(red.original.m), std::to_string(red.original.n),
      cell(r.original_time),
      std::to_string(red.rows_eliminated.m), std::to_string(red.rows_eliminated.n),
      format_real(red.rows_eliminated.seconds),
      std::to_string(red.rc_fixed.m), std::to_string(red.rc_fixed.n),
      format_real(red.rc_fixed.seconds),
      std::to_string(red.strong_fixed.m), std::to_string(red.strong_fixed.n),
      format_real(red.strong_fixed.seconds),
      format_real(r.reduced_time), format_real(r.objective), r.proved_optimal ? "1" : "0",
      std::to_string(red.n0_rc), std::to_string(red.n0_sf), std::to_string(red.n1_sf),
      cell(r.graph_vertices), cell(r.graph_edges), cell(r.opt_scp), cell(r.opt_cp2),
      cell(r.sum_z_scp), cell(r.sum_z_cp2)};
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  return out;
}

BenchRecord parse_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const std::vector<std::string_view> f = split(line);
  const std::vector<std::string>& cols = columns();
  if (f.size() != cols.size()) {
    throw RecordError("expected " + std::to_string(cols.size()) + " columns, got " +
                      std::to_string(f.size()));
  }
  std::size_t k = 0;
  const auto next = [&]() {
    const std::size_t i = k++;
    return std::pair{f[i], cols[i]};
  };
  const auto real = [&]() { auto [s, c] = next(); return parse_double(s, c); };
  const auto integer = [&]() { auto [s, c] = next(); return parse_int(s, c); };
  const auto opt_real = [&]() -> std::optional<double> {
    auto [s, c] = next();
    if (s.empty()) return std::nullopt;
    return parse_double(s, c);
  };
  const auto opt_int = [&]() -> std::optional<int> {
    auto [s, c] = next();
    if (s.empty()) return std::nullopt;
    return parse_int(s, c);
  };

  BenchRecord r;
  r.instance = std::string(next().first);
  r.mode = std::string(next().first);
  presolve::ReductionReport& red = r.reduction;
  red.original.m = integer();
  red.original.n = integer();
  r.original_time = opt_real();
  for (presolve::StageSize* s : {&red.rows_eliminated, &red.rc_fixed, &red.strong_fixed}) {
    s->m = integer();
    s->n = integer();
    s->seconds = real();
  }
  r.reduced_time = real();
  r.objective = real();
  {
    auto [s, c] = next();
    if (s != "0" && s != "1") throw RecordError("column '" + c + "': expected 0 or 1");
    r.proved_optimal = s == "1";
  }
  red.n0_rc = integer();
  red.n0_sf = integer();
  red.n1_sf = integer();
  r.graph_vertices = opt_int();
  r.graph_edges = opt_int();
  r.opt_scp = opt_real();
  r.opt_cp2 = opt_real();
  r.sum_z_scp = opt_int();
  r.sum_z_cp2 = opt_int();
  return r;
}

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::vector<BenchRecord> out;
  bool header_seen = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != csv_header()) throw RecordError("unexpected CSV header");
      header_seen = true;
      continue;
    }
    out.push_back(parse_csv_row(line));
  }
  if (!header_seen) throw RecordError("missing CSV header");
  return out;
}

bool is_time_column(std::string_view name) {
  return name.size() >= 5 && name.substr(name.size() - 5) == "_time";
}

}  // namespace slscover::report
