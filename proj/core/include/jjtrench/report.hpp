#pragma once

// Flat result records and their CSV / JSON renderings. CSV numbers carry
// 17 significant digits so files reparse to identical doubles.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jjtrench/decay_fit.hpp"
#include "jjtrench/fluct.hpp"
#include "jjtrench/geometry.hpp"
#include "jjtrench/junction.hpp"
#include "jjtrench/transmon.hpp"

namespace jjtrench::io {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);

using FieldValue = std::variant<double, long long, bool, std::string>;

struct Field {
  std::string name;
  FieldValue value;
};

using Record = std::vector<Field>;

/// Header line plus one line per record; all records must share field names.
std::string to_csv(const std::vector<Record>& records);
/// A single record renders as an object, several as an array of objects.
std::string to_json(const std::vector<Record>& records);
std::string render(const std::vector<Record>& records, OutputFormat format);

Record geometry_record(const geometry::JunctionGeometry& g);
Record geometry_record(const geometry::RotatedJunction& g, double rotation_deg);

Record junction_record(const junction::JunctionElectrical& j);
/// Density-only record for when just R_nA is known.
Record junction_density_record(double rna_ohm_um2, double delta_uev);

struct TransmonReport {
  transmon::TransmonParams params;
  transmon::Energies energies;
  double nbar = 0.0;
  double q_phi_photon = 0.0;
  std::optional<transmon::CoherenceSummary> coherence;
};

Record transmon_record(const TransmonReport& t);

/// One record per fitted parameter.
std::vector<Record> fit_records(const fit::FitResult& result,
                                const fit::ResidualDiagnostics& diagnostics);
/// Nested JSON document with params, stderr and diagnostics.
std::string fit_json(const fit::FitResult& result, const fit::ResidualDiagnostics& diagnostics);

std::vector<Record> allan_records(const fluct::AllanResult& allan,
                                  const std::vector<double>& white_adev);
std::vector<Record> psd_records(const fluct::PsdResult& psd, const fluct::ReferenceLines& lines);
Record summary_record(const fluct::TraceSummary& s);
std::vector<Record> histogram_records(const fluct::TraceSummary& s);

}  // namespace jjtrench::io
