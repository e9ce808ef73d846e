// jjtrench: trench junction geometry, junction/qubit figures of merit,
// coherence-curve fits and fluctuation statistics from the command line.
//
// Exit codes: 0 success, 2 validation, 3 computation, 4 I/O.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jjtrench/config.hpp"
#include "jjtrench/csv.hpp"
#include "jjtrench/decay_fit.hpp"
#include "jjtrench/errors.hpp"
#include "jjtrench/fluct.hpp"
#include "jjtrench/geometry.hpp"
#include "jjtrench/ingest.hpp"
#include "jjtrench/junction.hpp"
#include "jjtrench/pipeline.hpp"
#include "jjtrench/report.hpp"
#include "jjtrench/svg_plot.hpp"
#include "jjtrench/transmon.hpp"

namespace fs = std::filesystem;
using namespace jjtrench;

namespace {

struct GlobalOptions {
  std::string config;
  std::string out;
  std::string format;
};

io::DeviceConfig load(const GlobalOptions& g) {
  std::string path = g.config;
  if (path.empty()) {
    if (const char* env = std::getenv(io::kConfigEnvVar)) path = env;
  }
  if (path.empty()) {
    throw ValidationError(std::string("no config given (use --config or set ") +
                          io::kConfigEnvVar + ")");
  }
  auto cfg = io::load_config(path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

io::OutputFormat format_or(const GlobalOptions& g, io::OutputFormat fallback) {
  return g.format.empty() ? fallback : io::parse_format(g.format);
}

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    io::write_text_file(g.out, text);
  }
}

int run_geometry(const GlobalOptions& g, double rotation) {
  const auto cfg = load(g);
  const auto& profile = cfg.require_trench();
  const auto [s1, s2] = cfg.require_deposition_pair();
  const auto r = geometry::overlap_vs_rotation(profile, s1, s2, rotation);
  emit(g, io::render({io::geometry_record(r, rotation)}, format_or(g, io::OutputFormat::Json)));
  return 0;
}

struct JunctionArgs {
  std::optional<double> rn, area, rna, delta;
  std::string input;
};

int run_junction(const GlobalOptions& g, const JunctionArgs& a) {
  double delta = a.delta.value_or(junction::kDefaultGapMicroEv);

  if (!a.input.empty()) {
    // Batch: append rna, ic_na, jc_acm2 to every row.
    const auto table = io::read_csv(a.input);
    const auto rn = table.numeric_column("rn_ohm");
    const auto area = table.numeric_column("area_um2");
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
    out += ",rna,ic_na,jc_acm2\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto j = junction::characterize(rn[r], area[r], delta);
      for (std::size_t i = 0; i < table.rows[r].size(); ++i) out += (i ? "," : "") + table.rows[r][i];
      out += "," + io::format_double(j.rna_ohm_um2) + "," + io::format_double(j.i_c_na) + "," +
             io::format_double(j.j_c_a_per_cm2) + "\n";
    }
    emit(g, out);
    return 0;
  }

  JunctionArgs v = a;
  if (!v.rn && !v.rna) {
    const auto cfg = load(g);
    const auto& j = cfg.require_junction();
    v.rn = j.rn_ohm;
    v.area = v.area ? v.area : j.area_um2;
    v.rna = j.rna_ohm_um2;
    if (!a.delta) delta = j.delta_uev;
  }
  const auto fmt = format_or(g, io::OutputFormat::Json);
  if (v.rn && v.area) {
    emit(g, io::render({io::junction_record(junction::characterize(*v.rn, *v.area, delta))}, fmt));
  } else if (v.rna) {
    emit(g, io::render({io::junction_density_record(*v.rna, delta)}, fmt));
  } else if (v.rn) {
    io::Record r = {{"rn_ohm", *v.rn}, {"delta_uev", delta},
                    {"ic_na", junction::critical_current(*v.rn, delta)}};
    emit(g, io::render({r}, fmt));
  } else {
    throw ValidationError("junction needs --rn [--area], --rna, or --input");
  }
  return 0;
}

struct TransmonArgs {
  std::optional<double> t1, t2e, nbar;
  bool angular = false;
};

int run_transmon(const GlobalOptions& g, const TransmonArgs& a) {
  const auto cfg = load(g);
  auto t = cfg.require_transmon();
  if (a.t1) t.t1_us = a.t1;
  if (a.t2e) t.t2e_us = a.t2e;
  if (a.nbar) t.nbar = *a.nbar;
  if (a.angular) t.dephasing_units = transmon::DephasingUnits::StrictAngular;

  io::TransmonReport r;
  r.params = t.params;
  r.energies = transmon::energies_from_spectroscopy(t.params.f_qubit_mhz, t.params.alpha_mhz);
  if (r.energies.low_ratio_warning) std::cerr << "warning: E_J/E_C below 10\n";
  r.nbar = t.nbar;
  r.q_phi_photon = transmon::photon_dephasing_bound(t.nbar, t.params.kappa_khz, t.params.chi_khz,
                                                    t.params.f_qubit_mhz, t.dephasing_units);
  if (t.t1_us && t.t2e_us) {
    r.coherence = transmon::quality_factors(t.params.f_qubit_mhz, *t.t1_us, *t.t2e_us);
  }
  emit(g, io::render({io::transmon_record(r)}, format_or(g, io::OutputFormat::Json)));
  return 0;
}

int run_fit(const GlobalOptions& g, const std::string& model_name, const std::string& input) {
  const auto model = fit::parse_model(model_name);
  const auto curve = io::read_decay_curve(input);
  const auto result = fit::fit(model, curve);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  const auto diag = fit::residual_diagnostics(curve, result);
  if (format_or(g, io::OutputFormat::Json) == io::OutputFormat::Json) {
    emit(g, io::fit_json(result, diag));
  } else {
    emit(g, io::to_csv(io::fit_records(result, diag)));
  }
  return 0;
}

struct FluctArgs {
  std::string input;
  std::string column = "value_us";
  std::size_t segment_len = fluct::kDefaultSegmentLength;
  double aw = fluct::kDefaultWhiteLevel;
  std::size_t bins = 30;
  bool svg = false;
};

int run_fluct(const GlobalOptions& g, const FluctArgs& a) {
  const auto trace = io::ingest_trace(a.input, a.column);
  const auto allan = fluct::overlapping_allan(trace);
  const auto psd = fluct::welch_psd(trace, a.segment_len);
  const auto lines = fluct::reference_lines(psd, allan, a.aw);
  const auto summary = fluct::summarize(trace, a.bins);

  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  const auto fmt = format_or(g, io::OutputFormat::Csv);
  const std::string ext = fmt == io::OutputFormat::Csv ? ".csv" : ".json";
  io::write_text_file(dir / ("allan" + ext), io::render(io::allan_records(allan, lines.white_adev), fmt));
  io::write_text_file(dir / ("psd" + ext), io::render(io::psd_records(psd, lines), fmt));
  io::write_text_file(dir / ("summary" + ext), io::render({io::summary_record(summary)}, fmt));
  io::write_text_file(dir / ("histogram" + ext), io::render(io::histogram_records(summary), fmt));
  if (a.svg) io::write_text_file(dir / "fluct.svg", io::fluct_svg(trace, summary, allan, psd, lines));

  std::cout << "N=" << trace.values.size() << " tau0=" << io::format_double(trace.tau0_s)
            << " s mean=" << io::format_double(summary.mean)
            << " sd=" << io::format_double(summary.stddev)
            << " median=" << io::format_double(summary.median)
            << " rcv=" << io::format_double(summary.rcv) << "\n";
  for (const auto& p : fluct::allan_local_peaks(allan, a.aw)) {
    std::cout << "adev local maximum above white line at tau=" << io::format_double(p.tau) << " s\n";
  }
  return 0;
}

int run_pipeline_cmd(const GlobalOptions& g, double rotation) {
  if (g.out.empty()) throw ValidationError("pipeline needs --out <directory>");
  io::PipelineInputs in;
  in.config = load(g);
  in.config_path = g.config;
  in.rotation_deg = rotation;
  const auto report = io::run_pipeline(in, g.out);
  for (const auto& s : report.stages) {
    std::cout << s.name << ": " << io::status_name(s.status);
    if (!s.message.empty()) std::cout << " (" << s.message << ")";
    std::cout << "\n";
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jjtrench: trench Josephson junction and transmon characterization toolkit"};
  app.set_version_flag("--version", io::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Device config file (INI-style or JSON)")
      ->envname(io::kConfigEnvVar);
  app.add_option("--out", g.out, "Output file, or directory for fluct/pipeline");
  app.add_option("--format", g.format, "Output encoding")->check(CLI::IsMember({"csv", "json"}));

  double rotation = 0.0;
  auto* geo = app.add_subcommand("geometry", "Junction overlap from trench and deposition settings");
  geo->add_option("--rotation", rotation, "In-plane chip misalignment (deg)");

  JunctionArgs ja;
  auto* jun = app.add_subcommand("junction", "Ambegaokar-Baratoff critical current / density");
  jun->add_option("--rn", ja.rn, "Normal resistance (Ohm)");
  jun->add_option("--area", ja.area, "Junction area (um^2)");
  jun->add_option("--rna", ja.rna, "Resistance-area product (Ohm um^2)");
  jun->add_option("--delta", ja.delta, "Superconducting gap (ueV), default 180");
  jun->add_option("--input", ja.input, "Batch CSV with rn_ohm, area_um2 columns");

  TransmonArgs ta;
  auto* tra = app.add_subcommand("transmon", "E_J/E_C, quality factors, photon dephasing bound");
  tra->add_option("--t1", ta.t1, "T1 (us)");
  tra->add_option("--t2e", ta.t2e, "T2E (us)");
  tra->add_option("--nbar", ta.nbar, "Residual photon number");
  tra->add_flag("--angular", ta.angular, "Strict angular-unit dephasing bound");

  std::string model = "t1";
  std::string fit_input;
  auto* fitc = app.add_subcommand("fit", "Fit a T1 or Hahn-echo curve");
  fitc->add_option("--model", model, "t1 or echo")->check(CLI::IsMember({"t1", "echo"}));
  fitc->add_option("--input", fit_input, "CSV with delay_us, signal[, sigma]")->required();

  FluctArgs fa;
  auto* flu = app.add_subcommand("fluct", "Allan deviation, Welch PSD and RCV of a trace");
  flu->add_option("--input", fa.input, "Trace CSV (timestamp_s, value_us)")->required();
  flu->add_option("--column", fa.column, "Value column name");
  flu->add_option("--segment-len", fa.segment_len, "Welch segment length");
  flu->add_option("--aw", fa.aw, "White-noise reference level (us^2/Hz)");
  flu->add_option("--bins", fa.bins, "Histogram bins");
  flu->add_flag("--svg", fa.svg, "Also write fluct.svg");

  double pipe_rotation = 0.0;
  auto* pipe = app.add_subcommand("pipeline", "Run every configured stage into --out");
  pipe->add_option("--rotation", pipe_rotation, "In-plane chip misalignment (deg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*geo) return run_geometry(g, rotation);
    if (*jun) return run_junction(g, ja);
    if (*tra) return run_transmon(g, ta);
    if (*fitc) return run_fit(g, model, fit_input);
    if (*flu) return run_fluct(g, fa);
    if (*pipe) return run_pipeline_cmd(g, pipe_rotation);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(ErrorKind::Io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(ErrorKind::Computation);
  }
  return 0;
}
