#pragma once

// SVG rendering of instances and solutions in the unit square.
//
// Elements carry classes that tests and stylesheets can select on:
// "edge", "vertex", "disk" (candidate), "box", "disk chosen", "center".

#include <span>
#include <string>

#include "slscover/cp2.hpp"
#include "slscover/instance.hpp"

namespace slscover::svg {

struct SvgOptions {
  int pixels = 800;
  bool show_candidates = true;
};

/// Graph and candidate disks; with `chosen` nonempty those sites are drawn
/// as highlighted disks.
std::string render_cover(const Cp1Instance& inst, std::span<const int> chosen,
                         const SvgOptions& options = {});

/// Graph, candidate boxes of side `ell`, and for each chosen site its disk
/// around the solution center plus a center marker.
std::string render_location(const Cp1Instance& inst, double ell, const cp2::Cp2Solution& sol,
                            const SvgOptions& options = {});

}  // namespace slscover::svg
