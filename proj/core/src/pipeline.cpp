#include "jjtrench/pipeline.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <memory>

#include <json.hpp>

#include "jjtrench/csv.hpp"
#include "jjtrench/errors.hpp"
#include "jjtrench/ingest.hpp"
#include "jjtrench/report.hpp"
#include "jjtrench/svg_plot.hpp"

#ifndef JJTRENCH_VERSION
#define JJTRENCH_VERSION "0.0.0"
#endif

namespace jjtrench::io {
namespace fs = std::filesystem;

namespace {

struct StageContext {
  const PipelineInputs& in;
  fs::path out_dir;
  std::optional<geometry::JunctionGeometry> geometry;
  std::vector<std::string> warnings;

  void write(StageReport& stage, const std::string& name, std::string_view content) {
    write_text_file(out_dir / name, content);
    stage.files.push_back(name);
  }
};

void geometry_stage(StageContext& ctx, StageReport& stage) {
  const auto& cfg = ctx.in.config;
  const auto& profile = cfg.require_trench();
  const auto [step1, step2] = cfg.require_deposition_pair();
  const auto rotated = geometry::overlap_vs_rotation(profile, step1, step2, ctx.in.rotation_deg);
  ctx.geometry = rotated.junction;
  std::vector<Record> rec{geometry_record(rotated, ctx.in.rotation_deg)};
  rec.front().push_back({"thickness1_nm", geometry::effective_thickness(step1.nominal_nm, step1.tilt_deg)});
  rec.front().push_back({"thickness2_nm", geometry::effective_thickness(step2.nominal_nm, step2.tilt_deg)});
  rec.front().push_back({"min_width_nm", geometry::min_width_for_overlap(profile.depth_nm, step1.tilt_deg, step2.tilt_deg)});
  ctx.write(stage, "geometry.csv", to_csv(rec));
}

void junction_stage(StageContext& ctx, StageReport& stage) {
  const auto& j = ctx.in.config.require_junction();
  std::vector<Record> rec;
  if (j.rn_ohm) {
    std::optional<double> area = j.area_um2;
    if (!area && ctx.geometry && ctx.geometry->formed) {
      area = ctx.geometry->area_um2;
      ctx.warnings.push_back("junction: area_um2 taken from the geometry stage");
    }
    if (!area) throw ValidationError("[junction] rn_ohm needs area_um2 (or a formed geometry)");
    rec.push_back(junction_record(junction::characterize(*j.rn_ohm, *area, j.delta_uev)));
  } else if (j.rna_ohm_um2) {
    rec.push_back(junction_density_record(*j.rna_ohm_um2, j.delta_uev));
  } else {
    throw ValidationError("[junction] needs rn_ohm (+area_um2) or rna_ohm_um2");
  }
  ctx.write(stage, "junction.csv", to_csv(rec));
}

TransmonReport transmon_report(const TransmonSection& t) {
  TransmonReport r;
  r.params = t.params;
  r.energies = transmon::energies_from_spectroscopy(t.params.f_qubit_mhz, t.params.alpha_mhz);
  r.nbar = t.nbar;
  r.q_phi_photon = transmon::photon_dephasing_bound(t.nbar, t.params.kappa_khz, t.params.chi_khz,
                                                    t.params.f_qubit_mhz, t.dephasing_units);
  if (t.t1_us && t.t2e_us) {
    r.coherence = transmon::quality_factors(t.params.f_qubit_mhz, *t.t1_us, *t.t2e_us);
  }
  return r;
}

void transmon_stage(StageContext& ctx, StageReport& stage) {
  const auto report = transmon_report(ctx.in.config.require_transmon());
  if (report.energies.low_ratio_warning) {
    ctx.warnings.push_back("transmon: E_J/E_C below 10, outside the transmon regime");
  }
  ctx.write(stage, "transmon.csv", to_csv({transmon_record(report)}));
}

void fit_stage(StageContext& ctx, StageReport& stage) {
  const auto& f = ctx.in.config.require_fit();
  std::vector<std::pair<fit::DecayModel, fs::path>> jobs;
  if (f.t1_curve) jobs.emplace_back(fit::DecayModel::Relaxation, *f.t1_curve);
  if (f.echo_curve) jobs.emplace_back(fit::DecayModel::Echo, *f.echo_curve);
  if (jobs.empty()) throw ValidationError("[fit] names no t1_curve or echo_curve");

  // Curves are independent; fit them concurrently and collect in order.
  std::vector<std::future<std::vector<Record>>> futures;
  for (const auto& [model, path] : jobs) {
    futures.push_back(std::async(std::launch::async, [model = model, path = path] {
      const auto curve = read_decay_curve(path);
      const auto result = fit::fit(model, curve);
      return fit_records(result, fit::residual_diagnostics(curve, result));
    }));
  }
  std::vector<Record> rows;
  for (auto& fut : futures) {
    auto r = fut.get();
    rows.insert(rows.end(), r.begin(), r.end());
  }
  ctx.write(stage, "fit.csv", to_csv(rows));
}

void fluct_stage(StageContext& ctx, StageReport& stage) {
  const auto& f = ctx.in.config.require_fluct();
  if (!f.trace) throw ValidationError("[fluct] names no trace file");
  const auto trace = ingest_trace(*f.trace, f.column);
  const auto allan = fluct::overlapping_allan(trace);
  const auto psd = fluct::welch_psd(trace, f.segment_len);
  const auto lines = fluct::reference_lines(psd, allan, f.aw);
  const auto summary = fluct::summarize(trace, f.bins);

  ctx.write(stage, "allan.csv", to_csv(allan_records(allan, lines.white_adev)));
  ctx.write(stage, "psd.csv", to_csv(psd_records(psd, lines)));
  ctx.write(stage, "summary.csv", to_csv({summary_record(summary)}));
  ctx.write(stage, "histogram.csv", to_csv(histogram_records(summary)));
  for (const auto& peak : fluct::allan_local_peaks(allan, f.aw)) {
    ctx.warnings.push_back("fluct: ADEV local maximum above the white-noise line at tau = " +
                           format_double(peak.tau) + " s");
  }
  if (f.svg) {
    try {
      ctx.write(stage, "fluct.svg", fluct_svg(trace, summary, allan, psd, lines));
    } catch (const std::exception& e) {
      ctx.warnings.push_back(std::string("fluct: SVG output skipped: ") + e.what());
    }
  }
}

std::string manifest_text(const RunReport& report) {
  std::string out = "jjtrench " + report.version + "\n";
  out += std::string("status: ") + (report.complete ? "complete" : "incomplete") + "\n";
  for (const auto& s : report.stages) {
    out += s.name + ": " + std::string(status_name(s.status));
    for (const auto& f : s.files) out += " " + f;
    if (!s.message.empty()) out += " | " + s.message;
    out += "\n";
  }
  return out;
}

std::string report_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["version"] = report.version;
  doc["complete"] = report.complete;
  doc["exit_code"] = report.exit_code;
  auto& inputs = doc["inputs"] = nlohmann::ordered_json::array();
  for (const auto& i : report.inputs) inputs.push_back({{"path", i.path}, {"sha256", i.sha256}});
  auto& stages = doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"name", s.name},
                      {"status", std::string(status_name(s.status))},
                      {"message", s.message},
                      {"files", s.files},
                      {"seconds", s.seconds}});
  }
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace

std::string tool_version() { return JJTRENCH_VERSION; }

std::string sha256_file(const fs::path& path) {
  const std::string data = read_text_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!md || EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(md.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(md.get(), digest, &len) != 1) {
    throw IoError("sha256 failed for '" + path.string() + "'");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

std::string_view status_name(StageStatus s) {
  switch (s) {
    case StageStatus::Ok:
      return "ok";
    case StageStatus::Failed:
      return "failed";
    case StageStatus::Skipped:
      return "skipped";
    case StageStatus::NotConfigured:
      return "not-configured";
  }
  return "unknown";
}

RunReport run_pipeline(const PipelineInputs& inputs, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  const auto& cfg = inputs.config;
  RunReport report;
  report.version = tool_version();
  report.warnings = cfg.warnings;

  std::vector<fs::path> digest_paths;
  if (!inputs.config_path.empty()) digest_paths.push_back(inputs.config_path);
  if (cfg.fit) {
    if (cfg.fit->t1_curve) digest_paths.push_back(*cfg.fit->t1_curve);
    if (cfg.fit->echo_curve) digest_paths.push_back(*cfg.fit->echo_curve);
  }
  if (cfg.fluct && cfg.fluct->trace) digest_paths.push_back(*cfg.fluct->trace);
  for (const auto& p : digest_paths) {
    InputDigest d{p.filename().string(), "missing"};
    if (fs::exists(p)) d.sha256 = sha256_file(p);
    report.inputs.push_back(std::move(d));
  }

  StageContext ctx{inputs, out_dir, std::nullopt, {}};
  const std::vector<std::tuple<std::string, bool, std::function<void(StageContext&, StageReport&)>>>
      stages = {
          {"geometry", cfg.trench.has_value(), geometry_stage},
          {"junction", cfg.junction.has_value(), junction_stage},
          {"transmon", cfg.transmon.has_value(), transmon_stage},
          {"fit", cfg.fit.has_value(), fit_stage},
          {"fluct", cfg.fluct.has_value(), fluct_stage},
      };

  bool failed = false;
  for (const auto& [name, configured, run] : stages) {
    StageReport stage;
    stage.name = name;
    if (!configured) {
      stage.status = StageStatus::NotConfigured;
    } else if (failed) {
      stage.status = StageStatus::Skipped;
      stage.message = "earlier stage failed";
    } else {
      const auto start = std::chrono::steady_clock::now();
      try {
        run(ctx, stage);
        stage.status = StageStatus::Ok;
      } catch (const Error& e) {
        stage.status = StageStatus::Failed;
        stage.message = e.what();
        report.exit_code = exit_code_for(e.kind());
        failed = true;
      } catch (const std::exception& e) {
        stage.status = StageStatus::Failed;
        stage.message = e.what();
        report.exit_code = exit_code_for(ErrorKind::Computation);
        failed = true;
      }
      stage.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    report.stages.push_back(std::move(stage));
  }
  report.complete = !failed;
  report.warnings.insert(report.warnings.end(), ctx.warnings.begin(), ctx.warnings.end());

  write_text_file(out_dir / "MANIFEST.txt", manifest_text(report));
  write_text_file(out_dir / "report.json", report_json(report));
  return report;
}

}  // namespace jjtrench::io
