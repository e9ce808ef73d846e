#pragma once

// Device configuration: a sectioned key-value text file (INI style) or the
// equivalent JSON document. See README for the full schema.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jjtrench/geometry.hpp"
#include "jjtrench/junction.hpp"
#include "jjtrench/transmon.hpp"

namespace jjtrench::io {

/// Environment variable consulted for the config path when --config is absent.
inline constexpr const char* kConfigEnvVar = "JJTRENCH_CONFIG";

struct JunctionSection {
  std::optional<double> rn_ohm;
  std::optional<double> area_um2;
  std::optional<double> rna_ohm_um2;
  double delta_uev = junction::kDefaultGapMicroEv;
};

struct TransmonSection {
  transmon::TransmonParams params;
  double nbar = transmon::kDefaultResidualPhotons;
  std::optional<double> t1_us;
  std::optional<double> t2e_us;
  transmon::DephasingUnits dephasing_units = transmon::DephasingUnits::OrdinaryFrequency;
};

struct FitSection {
  std::optional<std::filesystem::path> t1_curve;
  std::optional<std::filesystem::path> echo_curve;
};

struct FluctSection {
  std::optional<std::filesystem::path> trace;
  std::string column = "value_us";
  std::size_t segment_len = 128;
  double aw = 6e3;
  std::size_t bins = 30;
  bool svg = true;
};

struct DeviceConfig {
  std::optional<geometry::TrenchProfile> trench;
  std::vector<geometry::DepositionStep> depositions;
  std::optional<JunctionSection> junction;
  std::optional<TransmonSection> transmon;
  std::optional<FitSection> fit;
  std::optional<FluctSection> fluct;
  /// Unknown sections/keys and similar non-fatal findings.
  std::vector<std::string> warnings;

  // Accessors throwing MissingSection.
  const geometry::TrenchProfile& require_trench() const;
  /// First two deposition steps.
  std::pair<geometry::DepositionStep, geometry::DepositionStep> require_deposition_pair() const;
  const JunctionSection& require_junction() const;
  const TransmonSection& require_transmon() const;
  const FitSection& require_fit() const;
  const FluctSection& require_fluct() const;
};

/// Parses and validates. Relative data paths resolve against base_dir.
DeviceConfig parse_config(std::string_view text, const std::string& source,
                          const std::filesystem::path& base_dir = {});

/// Reads a file; JSON is detected by a leading '{'.
DeviceConfig load_config(const std::filesystem::path& path);

}  // namespace jjtrench::io
