#include "jjtrench/report.hpp"

#include <cmath>

#include <json.hpp>

#include "jjtrench/csv.hpp"
#include "jjtrench/errors.hpp"

namespace jjtrench::io {
namespace {

std::string cell(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return x;
        }
      },
      v);
}

nlohmann::ordered_json json_value(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          // JSON has no inf/nan; keep them readable as strings.
          if (!std::isfinite(x)) return format_double(x);
          return x;
        } else {
          return x;
        }
      },
      v);
}

nlohmann::ordered_json json_object(const Record& r) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& f : r) obj[f.name] = json_value(f.value);
  return obj;
}

long long as_ll(std::size_t v) { return static_cast<long long>(v); }

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ValidationError("unknown output format '" + std::string(name) + "' (csv or json)");
}

std::string to_csv(const std::vector<Record>& records) {
  if (records.empty()) return {};
  std::string out;
  for (std::size_t i = 0; i < records.front().size(); ++i) {
    if (i) out += ',';
    out += records.front()[i].name;
  }
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += cell(r[i].value);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<Record>& records) {
  if (records.size() == 1) return json_object(records.front()).dump(2) + "\n";
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) arr.push_back(json_object(r));
  return arr.dump(2) + "\n";
}

std::string render(const std::vector<Record>& records, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(records) : to_json(records);
}

Record geometry_record(const geometry::JunctionGeometry& g) {
  return {{"overlap_width_nm", g.overlap_width_nm},
          {"overlap_length_nm", g.overlap_length_nm},
          {"area_um2", g.area_um2},
          {"formed", g.formed},
          {"junction_count", static_cast<long long>(g.junction_count)}};
}

Record geometry_record(const geometry::RotatedJunction& g, double rotation_deg) {
  Record r = geometry_record(g.junction);
  r.push_back({"rotation_deg", rotation_deg});
  r.push_back({"along_shift1_nm", g.along_shift1_nm});
  r.push_back({"along_shift2_nm", g.along_shift2_nm});
  return r;
}

Record junction_record(const junction::JunctionElectrical& j) {
  return {{"rn_ohm", j.r_n_ohm},        {"area_um2", j.area_um2},
          {"delta_uev", j.delta_uev},   {"rna", j.rna_ohm_um2},
          {"ic_na", j.i_c_na},          {"jc_acm2", j.j_c_a_per_cm2}};
}

Record junction_density_record(double rna_ohm_um2, double delta_uev) {
  return {{"rna", rna_ohm_um2},
          {"delta_uev", delta_uev},
          {"jc_acm2", junction::critical_current_density(rna_ohm_um2, delta_uev)}};
}

Record transmon_record(const TransmonReport& t) {
  Record r = {{"f_qubit_mhz", t.params.f_qubit_mhz},
              {"alpha_mhz", t.params.alpha_mhz},
              {"chi_khz", t.params.chi_khz},
              {"kappa_khz", t.params.kappa_khz},
              {"f_res_ghz", t.params.f_res_ghz},
              {"e_c_mhz", t.energies.e_c_mhz},
              {"e_j_mhz", t.energies.e_j_mhz},
              {"ej_ec_ratio", t.energies.ratio},
              {"transmon_regime", !t.energies.low_ratio_warning},
              {"nbar", t.nbar},
              {"q_phi_photon", t.q_phi_photon}};
  if (t.coherence) {
    r.push_back({"t1_us", t.coherence->t1_us});
    r.push_back({"t2e_us", t.coherence->t2e_us});
    r.push_back({"q1", t.coherence->q1});
    r.push_back({"q2e", t.coherence->q2e});
    r.push_back({"q_phi", t.coherence->q_phi});
  }
  return r;
}

std::vector<Record> fit_records(const fit::FitResult& result,
                                const fit::ResidualDiagnostics& diagnostics) {
  std::vector<Record> out;
  for (const auto& p : result.params) {
    out.push_back({{"model", std::string(fit::model_name(result.model))},
                   {"parameter", p.name},
                   {"value", p.value},
                   {"stderr", p.std_error},
                   {"residual_rms", result.residual_rms},
                   {"converged", result.converged},
                   {"iterations", static_cast<long long>(result.iterations)},
                   {"lag1_autocorr", diagnostics.lag1_autocorr},
                   {"diagnostics_pass", diagnostics.pass}});
  }
  return out;
}

std::string fit_json(const fit::FitResult& result, const fit::ResidualDiagnostics& diagnostics) {
  nlohmann::ordered_json doc;
  doc["model"] = std::string(fit::model_name(result.model));
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json errors = nlohmann::ordered_json::object();
  for (const auto& p : result.params) {
    params[p.name] = json_value(p.value);
    errors[p.name] = json_value(p.std_error);
  }
  doc["params"] = params;
  doc["stderr"] = errors;
  doc["residual_rms"] = json_value(result.residual_rms);
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  doc["gradient_norm"] = json_value(result.gradient_norm);
  nlohmann::ordered_json diag;
  diag["lag1_autocorr"] = json_value(diagnostics.lag1_autocorr);
  diag["reduced_chi_square"] = diagnostics.reduced_chi_square
                                   ? json_value(*diagnostics.reduced_chi_square)
                                   : nlohmann::ordered_json(nullptr);
  diag["pass"] = diagnostics.pass;
  doc["diagnostics"] = diag;
  doc["warnings"] = result.warnings;
  return doc.dump(2) + "\n";
}

std::vector<Record> allan_records(const fluct::AllanResult& allan,
                                  const std::vector<double>& white_adev) {
  std::vector<Record> out;
  for (std::size_t i = 0; i < allan.taus.size(); ++i) {
    out.push_back({{"tau_s", allan.taus[i]},
                   {"m", as_ll(allan.factors[i])},
                   {"adev", allan.adev[i]},
                   {"count", as_ll(allan.counts[i])},
                   {"white_adev", i < white_adev.size() ? white_adev[i] : 0.0}});
  }
  return out;
}

std::vector<Record> psd_records(const fluct::PsdResult& psd, const fluct::ReferenceLines& lines) {
  std::vector<Record> out;
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    out.push_back({{"freq_hz", psd.freqs[i]},
                   {"psd", psd.psd[i]},
                   {"one_over_f", lines.one_over_f[i]},
                   {"white_psd", lines.white_psd[i]},
                   {"segments", as_ll(psd.segment_count)}});
  }
  return out;
}

Record summary_record(const fluct::TraceSummary& s) {
  return {{"count", as_ll(s.count)}, {"mean", s.mean},   {"stddev", s.stddev},
          {"median", s.median},      {"q1", s.q1},       {"q3", s.q3},
          {"iqr", s.iqr},            {"rcv", s.rcv},     {"min", s.min},
          {"max", s.max},            {"gauss_mu", s.gauss_mu}, {"gauss_sigma", s.gauss_sigma}};
}

std::vector<Record> histogram_records(const fluct::TraceSummary& s) {
  std::vector<Record> out;
  const auto& h = s.histogram;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out.push_back({{"bin_lo", h.edges[b]}, {"bin_hi", h.edges[b + 1]}, {"count", as_ll(h.counts[b])}});
  }
  return out;
}

}  // namespace jjtrench::io
