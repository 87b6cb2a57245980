#pragma once

// JSON documents for solutions and fixing ledgers.
//
// Cover solution: {"kind": "scp", "objective", "columns", "proved_optimal",
//   "stats": {"nodes", "lp_solves", "presolve_seconds", "bnb_seconds", "total_seconds"}}
// Location solution: {"kind": "cp2", "objective", "sites": [{"j", "x": [x, y]}],
//   "assignments": [{"edge", "site"}], "proved_optimal",
//   "stats": {"nodes", "lp_solves", "cuts", "seconds"}}
// Ledger: {"entries": [{"column", "value", "rule", "bound", "ub", "source"}]}, with
// a null bound standing for +inf.

#include <stdexcept>
#include <string>

#include "slscover/cp2.hpp"
#include "slscover/presolve.hpp"
#include "slscover/scp.hpp"

namespace slscover::io {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const scp::CoverSolution& sol);
std::string to_json(const cp2::Cp2Solution& sol);
std::string to_json(const presolve::FixingLedger& ledger);

/// Parsers throw SchemaError naming the offending key.
scp::CoverSolution cover_solution_from_json(const std::string& text);
/// Unchosen sites get the centers of their boxes in `inst`.
cp2::Cp2Solution cp2_solution_from_json(const std::string& text, const Cp2Instance& inst);
presolve::FixingLedger ledger_from_json(const std::string& text);

/// "scp" or "cp2" from the document's "kind" key.
std::string solution_kind(const std::string& text);

}  // namespace slscover::io
