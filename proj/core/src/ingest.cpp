#include "jjtrench/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "jjtrench/csv.hpp"
#include "jjtrench/errors.hpp"

namespace jjtrench::io {

fluct::TimeTrace trace_from_table(const CsvTable& table, const std::string& column) {
  if (table.rows.empty()) throw EmptyTrace(table.source + ": no data rows");
  const auto stamps = table.numeric_column(kTimestampColumn);
  auto values = table.numeric_column(column);
  if (values.size() < 2) throw TraceTooShort(values.size(), fluct::kMinTraceLength);

  std::vector<double> steps(stamps.size() - 1);
  for (std::size_t i = 1; i < stamps.size(); ++i) steps[i - 1] = stamps[i] - stamps[i - 1];
  std::vector<double> sorted = steps;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double tau0 =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  if (!(tau0 > 0.0)) {
    throw ValidationError(table.source + ": timestamps are not increasing");
  }

  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (std::abs(steps[i] - tau0) > 0.5 * tau0) bad.push_back(i + 1);
  }
  if (!bad.empty()) {
    std::string msg = table.source + ": non-uniform sampling (tau0 = " + format_double(tau0) +
                      " s) at data row(s)";
    for (std::size_t k = 0; k < bad.size() && k < 20; ++k) msg += " " + std::to_string(bad[k]);
    if (bad.size() > 20) msg += " ...";
    throw GapError(msg, std::move(bad));
  }

  fluct::TimeTrace trace;
  trace.tau0_s = tau0;
  trace.values = std::move(values);
  trace.label = table.source + ":" + column;
  trace.validate();
  return trace;
}

fluct::TimeTrace ingest_trace(const std::filesystem::path& path, const std::string& column) {
  return trace_from_table(read_csv(path), column);
}

fit::DecayCurve read_decay_curve(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  fit::DecayCurve curve;
  curve.delays_us = table.numeric_column("delay_us");
  curve.signals = table.numeric_column("signal");
  if (table.find_column("sigma")) curve.sigmas = table.numeric_column("sigma");
  return curve;
}

}  // namespace jjtrench::io
