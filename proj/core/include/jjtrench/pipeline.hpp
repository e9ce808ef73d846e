#pragma once

// Runs the configured stages (geometry, junction, transmon, fit, fluct) in
// order, writing stable result files plus MANIFEST.txt and report.json.

#include <filesystem>
#include <string>
#include <vector>

#include "jjtrench/config.hpp"

namespace jjtrench::io {

std::string tool_version();

/// SHA-256 of a file as lowercase hex.
std::string sha256_file(const std::filesystem::path& path);

enum class StageStatus { Ok, Failed, Skipped, NotConfigured };

std::string_view status_name(StageStatus s);

struct StageReport {
  std::string name;
  StageStatus status = StageStatus::NotConfigured;
  std::string message;
  std::vector<std::string> files;
  double seconds = 0.0;
};

struct InputDigest {
  std::string path;
  std::string sha256;
};

struct RunReport {
  std::string version;
  std::vector<InputDigest> inputs;
  std::vector<StageReport> stages;
  std::vector<std::string> warnings;
  bool complete = false;
  /// Exit code of the first failed stage, 0 when complete.
  int exit_code = 0;
};

struct PipelineInputs {
  DeviceConfig config;
  std::filesystem::path config_path;  // digested when non-empty
  double rotation_deg = 0.0;
};

/// Never throws for stage failures; they are recorded in the report and the
/// MANIFEST. Throws IoError if out_dir itself cannot be created.
RunReport run_pipeline(const PipelineInputs& inputs, const std::filesystem::path& out_dir);

}  // namespace jjtrench::io
