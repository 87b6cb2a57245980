#include "slscover/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace slscover::svg {
namespace {

// Fixed precision keeps re-renders byte-identical.
std::string num(double v) { return fmt::format("{:.6f}", v); }

void open_document(std::string& out, const SvgOptions& o) {
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
      "viewBox=\"0 0 1 1\">\n",
      o.pixels);
  out +=
      "<style>.edge{stroke:#222;stroke-width:0.003}.vertex{fill:#222}"
      ".disk{fill:#4a90d9;fill-opacity:0.08;stroke:#4a90d9;stroke-width:0.001}"
      ".box{fill:none;stroke:#999;stroke-width:0.001}"
      ".chosen{fill:#e8743b;fill-opacity:0.25;stroke:#e8743b;stroke-width:0.002}"
      ".center{fill:#e8743b}</style>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n";
  // Instance coordinates have y pointing up.
  out += "<g transform=\"matrix(1 0 0 -1 0 1)\">\n";
}

void close_document(std::string& out) { out += "</g>\n</svg>\n"; }

void circle(std::string& out, const char* cls, Point2 c, double r) {
  out += fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", cls, num(c.x),
                     num(c.y), num(r));
}

void graph(std::string& out, const Cp1Instance& inst) {
  for (const auto& [u, v] : inst.edges) {
    const Point2 a = inst.vertices[u];
    const Point2 b = inst.vertices[v];
    out += fmt::format("<line class=\"edge\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                       num(a.x), num(a.y), num(b.x), num(b.y));
  }
  for (const Point2& p : inst.vertices) circle(out, "vertex", p, 0.006);
}

void check_sites(const Cp1Instance& inst, std::span<const int> sites) {
  for (int j : sites) {
    if (j < 0 || j >= static_cast<int>(inst.sites.size())) {
      throw std::out_of_range("site index " + std::to_string(j) + " out of range");
    }
  }
}

}  // namespace

std::string render_cover(const Cp1Instance& inst, std::span<const int> chosen,
                         const SvgOptions& options) {
  check_sites(inst, chosen);
  std::string out;
  open_document(out, options);
  if (options.show_candidates) {
    for (const Site& s : inst.sites) circle(out, "disk", s.center, s.radius);
  }
  graph(out, inst);
  std::vector<int> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int j : sorted) circle(out, "disk chosen", inst.sites[j].center, inst.sites[j].radius);
  close_document(out);
  return out;
}

std::string render_location(const Cp1Instance& inst, double ell, const cp2::Cp2Solution& sol,
                            const SvgOptions& options) {
  check_sites(inst, sol.sites);
  if (sol.centers.size() != inst.sites.size()) {
    throw std::invalid_argument("solution centers do not match the instance sites");
  }
  std::string out;
  open_document(out, options);
  if (options.show_candidates) {
    for (const Site& s : inst.sites) {
      const Box b = Box::centered(s.center, ell);
      out += fmt::format("<rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
                         num(b.lo.x), num(b.lo.y), num(b.hi.x - b.lo.x), num(b.hi.y - b.lo.y));
    }
  }
  graph(out, inst);
  for (int j : sol.sites) circle(out, "disk chosen", sol.centers[j], inst.sites[j].radius);
  for (int j : sol.sites) circle(out, "center", sol.centers[j], 0.004);
  close_document(out);
  return out;
}

}  // namespace slscover::svg
