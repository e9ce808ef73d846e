#include "jjtrench/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "jjtrench/csv.hpp"
#include "jjtrench/errors.hpp"

namespace jjtrench::io {
namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"trench", {"depth_nm", "sidewall_deg", "segments"}},
      {"deposition", {"tilt_deg", "nominal_nm", "rotation_deg"}},
      {"junction", {"rn_ohm", "area_um2", "rna_ohm_um2", "delta_uev"}},
      {"transmon",
       {"f_qubit_mhz", "alpha_mhz", "chi_khz", "kappa_khz", "f_res_ghz", "nbar", "t1_us",
        "t2e_us", "dephasing_units"}},
      {"fit", {"t1_curve", "echo_curve"}},
      {"fluct", {"trace", "column", "segment_len", "aw", "bins", "svg"}},
  };
  return s;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Section> parse_ini(std::string_view text, const std::string& source) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    if (const auto hash = raw.find_first_of("#;"); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const std::size_t indent = raw.find_first_not_of(" \t") + 1;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, line_no, indent, "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) throw ParseError(source, line_no, indent, "empty section name");
      sections.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, indent, "expected 'key = value'");
    }
    if (sections.empty()) {
      throw ParseError(source, line_no, indent, "key outside of any [section]");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError(source, line_no, indent, "empty key");
    const std::string_view rest = line.substr(eq + 1);
    const std::string_view value = trim(rest);
    const std::size_t value_col =
        indent + eq + 1 + (value.empty() ? 0 : static_cast<std::size_t>(value.data() - rest.data()));
    sections.back().entries.push_back({key, std::string(value), line_no, value_col});
  }
  return sections;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return format_double(v.get<double>());
  return v.dump();
}

std::vector<Section> parse_json(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Map the byte offset back to line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source, line, col, e.what());
  }
  if (!doc.is_object()) throw ParseError(source, 1, 1, "top level must be an object");

  std::vector<Section> sections;
  auto add_object = [&](const std::string& name, const nlohmann::json& obj) {
    if (!obj.is_object()) throw ParseError(source, 1, 1, "section '" + name + "' must be an object");
    Section s{name, 0, {}};
    for (const auto& [key, value] : obj.items()) {
      if (name == "trench" && key == "segments" && value.is_array()) {
        std::string joined;
        for (const auto& seg : value) {
          if (!seg.is_array() || seg.size() != 2) {
            throw ParseError(source, 1, 1, "trench.segments entries must be [length_nm, width_nm]");
          }
          if (!joined.empty()) joined += ", ";
          joined += json_scalar(seg[0]) + ":" + json_scalar(seg[1]);
        }
        s.entries.push_back({key, joined, 0, 0});
      } else {
        s.entries.push_back({key, json_scalar(value), 0, 0});
      }
    }
    sections.push_back(std::move(s));
  };
  for (const auto& [name, value] : doc.items()) {
    if (name == "deposition" && value.is_array()) {
      for (const auto& step : value) add_object(name, step);
    } else {
      add_object(name, value);
    }
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const Section& s, const std::string& source, std::vector<std::string>& warnings)
      : section_(s), source_(source) {
    const auto& known = schema().at(s.name);
    std::vector<std::string> unknown;
    for (const auto& e : s.entries) {
      if (!known.count(e.key)) unknown.push_back(e.key);
    }
    if (!unknown.empty()) {
      std::string msg = source + ": ignoring unknown key(s) in [" + s.name + "]:";
      for (const auto& k : unknown) msg += " " + k;
      warnings.push_back(msg);
    }
  }

  const Entry* find(const std::string& key) const {
    const Entry* found = nullptr;
    for (const auto& e : section_.entries) {
      if (e.key == key) found = &e;  // last one wins
    }
    return found;
  }

  std::optional<double> number(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    const auto v = parse_double(e->value);
    if (!v) {
      throw ParseError(source_, e->line, e->column,
                       "[" + section_.name + "] " + key + ": not a number: '" + e->value + "'");
    }
    return v;
  }

  double required(const std::string& key) const {
    if (auto v = number(key)) return *v;
    throw ValidationError(source_ + ": [" + section_.name + "] is missing required key '" + key + "'");
  }

  std::optional<std::string> text(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }

  std::optional<std::size_t> count(const std::string& key) const {
    auto v = number(key);
    if (!v) return std::nullopt;
    if (*v < 0.0 || std::floor(*v) != *v) {
      throw ValidationError(source_ + ": [" + section_.name + "] " + key +
                            " must be a non-negative integer");
    }
    return static_cast<std::size_t>(*v);
  }

  std::vector<geometry::TrenchSegment> segments(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) {
      throw ValidationError(source_ + ": [trench] is missing required key '" + key + "'");
    }
    std::vector<geometry::TrenchSegment> out;
    std::string_view rest = e->value;
    std::size_t offset = 0;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto colon = item.find(':');
      auto fail = [&] {
        throw ParseError(source_, e->line, e->column + offset,
                         "segments: expected 'length_nm:width_nm', got '" + std::string(trim(item)) + "'");
      };
      if (colon == std::string_view::npos) fail();
      const auto len = parse_double(item.substr(0, colon));
      const auto width = parse_double(item.substr(colon + 1));
      if (!len || !width) fail();
      out.push_back({*len, *width});
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      offset += comma + 1;
    }
    return out;
  }

 private:
  const Section& section_;
  const std::string& source_;
};

bool parse_bool(const std::string& v, const std::string& source, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError(source + ": " + key + " must be a boolean, got '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

void validate_prefixed(const std::string& source, auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.message());
  } catch (const DomainError& e) {
    throw ValidationError(source + ": " + e.message());
  }
}

DeviceConfig build(const std::vector<Section>& sections, const std::string& source,
                   const std::filesystem::path& base_dir) {
  DeviceConfig cfg;
  std::set<std::string> seen;
  for (const auto& s : sections) {
    if (!schema().count(s.name)) {
      cfg.warnings.push_back(source + ": ignoring unknown section [" + s.name + "]");
      continue;
    }
    if (s.name != "deposition" && !seen.insert(s.name).second) {
      throw ParseError(source, s.line, 1, "duplicate section [" + s.name + "]");
    }
    SectionReader r(s, source, cfg.warnings);

    if (s.name == "trench") {
      geometry::TrenchProfile p;
      p.depth_nm = r.required("depth_nm");
      p.sidewall_deg = r.number("sidewall_deg").value_or(90.0);
      p.segments = r.segments("segments");
      validate_prefixed(source, [&] { p.validate(); });
      cfg.trench = std::move(p);
    } else if (s.name == "deposition") {
      geometry::DepositionStep d;
      d.tilt_deg = r.required("tilt_deg");
      d.nominal_nm = r.required("nominal_nm");
      d.in_plane_rotation_deg = r.number("rotation_deg").value_or(0.0);
      validate_prefixed(source, [&] { d.validate(); });
      cfg.depositions.push_back(d);
    } else if (s.name == "junction") {
      JunctionSection j;
      j.rn_ohm = r.number("rn_ohm");
      j.area_um2 = r.number("area_um2");
      j.rna_ohm_um2 = r.number("rna_ohm_um2");
      j.delta_uev = r.number("delta_uev").value_or(junction::kDefaultGapMicroEv);
      for (const auto& [name, v] : {std::pair{"rn_ohm", j.rn_ohm}, std::pair{"area_um2", j.area_um2},
                                    std::pair{"rna_ohm_um2", j.rna_ohm_um2},
                                    std::pair{"delta_uev", std::optional<double>(j.delta_uev)}}) {
        if (v && !(*v > 0.0)) {
          throw ValidationError(source + ": [junction] " + name + " must be > 0");
        }
      }
      cfg.junction = j;
    } else if (s.name == "transmon") {
      TransmonSection t;
      t.params.f_qubit_mhz = r.required("f_qubit_mhz");
      t.params.alpha_mhz = r.required("alpha_mhz");
      t.params.chi_khz = r.required("chi_khz");
      t.params.kappa_khz = r.required("kappa_khz");
      t.params.f_res_ghz = r.number("f_res_ghz").value_or(0.0);
      t.nbar = r.number("nbar").value_or(transmon::kDefaultResidualPhotons);
      t.t1_us = r.number("t1_us");
      t.t2e_us = r.number("t2e_us");
      if (auto units = r.text("dephasing_units")) {
        if (*units == "ordinary") {
          t.dephasing_units = transmon::DephasingUnits::OrdinaryFrequency;
        } else if (*units == "angular") {
          t.dephasing_units = transmon::DephasingUnits::StrictAngular;
        } else {
          throw ValidationError(source + ": [transmon] dephasing_units must be 'ordinary' or 'angular'");
        }
      }
      validate_prefixed(source, [&] { t.params.validate(); });
      if (!(t.nbar >= 0.0)) throw ValidationError(source + ": [transmon] nbar must be >= 0");
      if (t.t1_us && !(*t.t1_us > 0.0)) throw ValidationError(source + ": [transmon] t1_us must be > 0");
      if (t.t2e_us && !(*t.t2e_us > 0.0)) throw ValidationError(source + ": [transmon] t2e_us must be > 0");
      cfg.transmon = t;
    } else if (s.name == "fit") {
      FitSection f;
      if (auto p = r.text("t1_curve")) f.t1_curve = resolve(base_dir, *p);
      if (auto p = r.text("echo_curve")) f.echo_curve = resolve(base_dir, *p);
      cfg.fit = f;
    } else if (s.name == "fluct") {
      FluctSection f;
      if (auto p = r.text("trace")) f.trace = resolve(base_dir, *p);
      if (auto c = r.text("column")) f.column = *c;
      f.segment_len = r.count("segment_len").value_or(f.segment_len);
      f.aw = r.number("aw").value_or(f.aw);
      f.bins = r.count("bins").value_or(f.bins);
      if (auto v = r.text("svg")) f.svg = parse_bool(*v, source, "[fluct] svg");
      if (f.segment_len < 2) throw ValidationError(source + ": [fluct] segment_len must be >= 2");
      if (f.bins < 1) throw ValidationError(source + ": [fluct] bins must be >= 1");
      if (!(f.aw >= 0.0)) throw ValidationError(source + ": [fluct] aw must be >= 0");
      cfg.fluct = f;
    }
  }
  return cfg;
}

}  // namespace

const geometry::TrenchProfile& DeviceConfig::require_trench() const {
  if (!trench) throw MissingSection("trench");
  return *trench;
}

std::pair<geometry::DepositionStep, geometry::DepositionStep>
DeviceConfig::require_deposition_pair() const {
  if (depositions.size() < 2) {
    throw MissingSection("deposition");
  }
  return {depositions[0], depositions[1]};
}

const JunctionSection& DeviceConfig::require_junction() const {
  if (!junction) throw MissingSection("junction");
  return *junction;
}

const TransmonSection& DeviceConfig::require_transmon() const {
  if (!transmon) throw MissingSection("transmon");
  return *transmon;
}

const FitSection& DeviceConfig::require_fit() const {
  if (!fit) throw MissingSection("fit");
  return *fit;
}

const FluctSection& DeviceConfig::require_fluct() const {
  if (!fluct) throw MissingSection("fluct");
  return *fluct;
}

DeviceConfig parse_config(std::string_view text, const std::string& source,
                          const std::filesystem::path& base_dir) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string_view::npos && text[first] == '{';
  const auto sections = is_json ? parse_json(text, source) : parse_ini(text, source);
  return build(sections, source, base_dir);
}

DeviceConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string(), path.parent_path());
}

}  // namespace jjtrench::io
