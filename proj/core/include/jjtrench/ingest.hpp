#pragma once

#include <filesystem>
#include <string>

#include "jjtrench/csv.hpp"
#include "jjtrench/decay_fit.hpp"
#include "jjtrench/fluct.hpp"

namespace jjtrench::io {

inline constexpr const char* kTimestampColumn = "timestamp_s";

/// Reads a trace CSV (timestamp_s, <column>, ...). tau0 is the median
/// timestamp step; any step off by more than 50% raises GapError.
fluct::TimeTrace ingest_trace(const std::filesystem::path& path,
                              const std::string& column = "value_us");

/// Same as ingest_trace but from an already parsed table.
fluct::TimeTrace trace_from_table(const CsvTable& table, const std::string& column);

/// Reads delay_us, signal[, sigma] columns.
fit::DecayCurve read_decay_curve(const std::filesystem::path& path);

}  // namespace jjtrench::io
