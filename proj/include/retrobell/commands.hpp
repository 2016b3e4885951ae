#pragma once

// The three batch commands behind the retrobell tool. Each returns the
// summary document it emits; run and scan also write their data files into
// the output directory. Outputs contain no timestamps or thread counts, so a
// rerun with the same config and seed is byte-identical.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "retrobell/config.hpp"

namespace retrobell {

inline constexpr const char* kExactSchema = "retrobell.exact/1";
inline constexpr const char* kRunSchema = "retrobell.run/1";
inline constexpr const char* kScanSchema = "retrobell.scan/1";
inline constexpr const char* kRecordsSchema = "retrobell.records/1";
inline constexpr const char* kHistogramSchema = "retrobell.histogram/1";

/// Closed-form predictions only; no sampling.
nlohmann::ordered_json cmd_exact(const ScenarioConfig& config);

/// Writes summary.json, records.csv and hist_wing{1,2}_{all,plus,minus}.csv.
/// Propagates SeparationError when the branches cannot be resolved.
nlohmann::ordered_json cmd_run(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Writes scan.csv and scan_summary.json.
nlohmann::ordered_json cmd_scan(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// CSV with header `bin_lo,bin_hi,weight`; underflow and overflow rows use
/// -inf and inf as their open bounds.
std::string histogram_csv(const DensityHistogram& h);

}  // namespace retrobell
