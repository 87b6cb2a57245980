#pragma once

// Instance persistence. JSON output uses a fixed key order and 17 significant
// digits so that identical instances serialize to identical bytes.

#include <filesystem>
#include <string>

#include "slscover/instance.hpp"

namespace slscover {

inline constexpr int kInstanceFormatVersion = 1;

std::string to_json(const Cp1Instance& inst);

/// Throws InstanceError naming the offending key on schema violations.
Cp1Instance instance_from_json(const std::string& text);

void write_instance(const std::filesystem::path& path, const Cp1Instance& inst);
Cp1Instance read_instance(const std::filesystem::path& path);

/// Sparse text form: "m n", one line per row "count c1 c2 ...", then
/// "weights" followed by n weights, one per line.
std::string to_scp_text(const ScpInstance& scp);
ScpInstance scp_from_text(const std::string& text);

/// printf("%.17g") formatting shared by the JSON writers.
std::string format_real(double v);

}  // namespace slscover
