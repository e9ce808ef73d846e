#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "jjtrench/config.hpp"
#include "jjtrench/csv.hpp"
#include "jjtrench/errors.hpp"
#include "jjtrench/geometry.hpp"
#include "jjtrench/ingest.hpp"
#include "jjtrench/report.hpp"
#include "jjtrench/transmon.hpp"

using namespace jjtrench;
using namespace jjtrench::io;
namespace fs = std::filesystem;

namespace {

const fs::path kData = JJTRENCH_DATA_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "jjtrench_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string trace_csv(int rows, double step, int gap_row = -1, double gap = 0.0) {
  std::string s = "timestamp_s,value_us\n";
  double t = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (i == gap_row) t += gap;
    s += format_double(t) + "," + format_double(140.0 + (i % 7)) + "\n";
    t += step;
  }
  return s;
}

}  // namespace

TEST(Csv, ParseAndColumns) {
  const auto t = parse_csv("a,b\n1,2\n3.5,-4e2\n", "mem");
  EXPECT_EQ(t.header.size(), 2u);
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.numeric_column("b")[1], -400.0);
  EXPECT_FALSE(t.find_column("c").has_value());
  EXPECT_THROW(t.column("c"), ValidationError);
}

TEST(Csv, BadCellNamesLineAndColumn) {
  const auto t = parse_csv("a,b\n1,2\n3,oops\n", "bad.csv");
  try {
    t.numeric_column("b");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.csv"), std::string::npos);
    EXPECT_NE(msg.find("3"), std::string::npos);
  }
}

TEST(Csv, DoubleRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 140.8}) {
    EXPECT_EQ(*parse_double(format_double(v)), v);
  }
  EXPECT_FALSE(parse_double("1.5x").has_value());
  EXPECT_EQ(format_double(INFINITY), "inf");
}

TEST(Csv, MissingFileIsIoError) {
  EXPECT_THROW(read_csv("/nonexistent/dir/file.csv"), IoError);
}

TEST(Config, SampleReproducesQ20) {
  const auto cfg = load_config(kData / "sample_config.ini");
  const auto& tr = cfg.require_transmon();
  const auto e = transmon::energies_from_spectroscopy(tr.params.f_qubit_mhz, tr.params.alpha_mhz);
  EXPECT_NEAR(e.ratio, 31.0, 0.05);
  EXPECT_EQ(cfg.depositions.size(), 2u);
  EXPECT_EQ(cfg.require_trench().segments.size(), 3u);
  EXPECT_TRUE(fs::exists(*cfg.require_fluct().trace));
  EXPECT_TRUE(cfg.warnings.empty());
}

TEST(Config, JsonMatchesIni) {
  const auto ini = load_config(kData / "sample_config.ini");
  const auto json = load_config(kData / "sample_config.json");
  const auto [a1, a2] = ini.require_deposition_pair();
  const auto [b1, b2] = json.require_deposition_pair();
  EXPECT_EQ(a1.tilt_deg, b1.tilt_deg);
  EXPECT_EQ(a2.nominal_nm, b2.nominal_nm);
  EXPECT_EQ(ini.require_trench().segments[1].top_width_nm,
            json.require_trench().segments[1].top_width_nm);
  EXPECT_EQ(ini.require_transmon().params.kappa_khz, json.require_transmon().params.kappa_khz);
  EXPECT_EQ(*ini.require_fit().echo_curve, *json.require_fit().echo_curve);
}

TEST(Config, SidewallOutOfRange) {
  const std::string text = "[trench]\ndepth_nm = 1100\nsidewall_deg = 95\nsegments = 100:3000\n";
  EXPECT_THROW(parse_config(text, "cfg.ini"), ValidationError);
}

TEST(Config, TransmonOnly) {
  const std::string text =
      "[transmon]\nf_qubit_mhz = 2714.2\nalpha_mhz = 190\nchi_khz = -110\n"
      "kappa_khz = 206\nf_res_ghz = 6.73\n";
  const auto cfg = parse_config(text, "min.ini");
  EXPECT_EQ(cfg.require_transmon().nbar, 0.01);
  EXPECT_THROW(cfg.require_trench(), MissingSection);
  EXPECT_THROW(cfg.require_deposition_pair(), MissingSection);
}

TEST(Config, JunctionGapDefault) {
  const auto cfg = parse_config("[junction]\nrn_ohm = 6600\n", "j.ini");
  EXPECT_EQ(cfg.require_junction().delta_uev, 180.0);
}

TEST(Config, SyntaxErrorCarriesPosition) {
  try {
    parse_config("[trench]\ndepth_nm = 1100\nsidewall_deg 87\n", "broken.ini");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("broken.ini"), std::string::npos);
    EXPECT_NE(msg.find(":3"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_config("{\"trench\": [}", "broken.json"), ParseError);
  EXPECT_THROW(parse_config("[trench]\ndepth_nm = abc\n", "x.ini"), ParseError);
}

TEST(Config, UnknownKeysWarn) {
  const auto cfg = parse_config("[junction]\nrn_ohm = 1\ncolour = blue\n[extras]\nx = 1\n", "w.ini");
  EXPECT_EQ(cfg.warnings.size(), 2u);
}

TEST(Config, DuplicateSectionRejected) {
  EXPECT_THROW(parse_config("[junction]\nrn_ohm = 1\n[junction]\nrn_ohm = 2\n", "d.ini"),
               ParseError);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/config.ini"), IoError);
}

TEST(Ingest, SampleTrace) {
  const auto t = ingest_trace(kData / "t1_trace.csv");
  EXPECT_EQ(t.values.size(), 4320u);
  EXPECT_DOUBLE_EQ(t.tau0_s, 30.0);
}

TEST(Ingest, SingleRowRejected) {
  const auto p = scratch("one_row.csv");
  write_text_file(p, "timestamp_s,value_us\n0,140.2\n");
  EXPECT_THROW(ingest_trace(p), TraceTooShort);
  write_text_file(p, "timestamp_s,value_us\n");
  EXPECT_THROW(ingest_trace(p), EmptyTrace);
}

TEST(Ingest, GapReported) {
  const auto p = scratch("gap.csv");
  write_text_file(p, trace_csv(100, 30.0, 40, 600.0));
  try {
    ingest_trace(p);
    FAIL();
  } catch (const GapError& e) {
    EXPECT_NE(std::string(e.what()).find("40"), std::string::npos) << e.what();
  }
}

TEST(Ingest, MissingColumn) {
  const auto p = scratch("cols.csv");
  write_text_file(p, trace_csv(40, 60.0));
  EXPECT_THROW(ingest_trace(p, "t2e_us"), ValidationError);
  EXPECT_DOUBLE_EQ(ingest_trace(p).tau0_s, 60.0);
}

TEST(Ingest, DecayCurveWithSigma) {
  const auto p = scratch("curve.csv");
  write_text_file(p, "delay_us,signal,sigma\n0,1,0.1\n10,0.5,0.1\n20,0.25,0.1\n");
  const auto c = read_decay_curve(p);
  EXPECT_EQ(c.delays_us.size(), 3u);
  EXPECT_TRUE(c.has_sigmas());
  const auto sample = read_decay_curve(kData / "t1_curve.csv");
  EXPECT_FALSE(sample.has_sigmas());
}

TEST(Report, CsvReparses) {
  const std::vector<Record> recs = {
      {{"x", 1.0 / 3.0}, {"n", 5LL}, {"ok", true}, {"name", std::string("t1")}},
      {{"x", 2.5}, {"n", 6LL}, {"ok", false}, {"name", std::string("echo")}}};
  const auto table = parse_csv(to_csv(recs), "mem");
  EXPECT_EQ(table.header, (std::vector<std::string>{"x", "n", "ok", "name"}));
  EXPECT_EQ(table.numeric_column("x")[0], 1.0 / 3.0);
  EXPECT_EQ(table.rows[1][3], "echo");
}

TEST(Report, JsonNonFiniteAsString) {
  const auto j = nlohmann::json::parse(to_json({{{"q_phi", INFINITY}, {"q1", 3.0}}}));
  EXPECT_EQ(j["q_phi"], "inf");
  EXPECT_EQ(j["q1"], 3.0);
  const auto arr = nlohmann::json::parse(to_json({{{"a", 1.0}}, {{"a", 2.0}}}));
  EXPECT_TRUE(arr.is_array());
}

TEST(Report, GeometryFields) {
  geometry::JunctionGeometry g{360.19, 180.0, 0.0648, true, 1};
  const auto rec = geometry_record(g);
  const auto j = nlohmann::json::parse(to_json({rec}));
  EXPECT_EQ(j["overlap_width_nm"], 360.19);
  EXPECT_EQ(j["formed"], true);
  EXPECT_THROW(parse_format("xml"), ValidationError);
}
