#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "langspin/dynamics.hpp"
#include "langspin/report_io.hpp"

using namespace langspin;

namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("langspin_report_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(LocalMagnetization, ConstantAndAlternating) {
  std::vector<std::vector<Spin>> up(10, std::vector<Spin>{1, 1, 1});
  for (double m : local_magnetization(up, 3)) EXPECT_DOUBLE_EQ(m, 1.0);
  std::vector<std::vector<Spin>> alt;
  for (int t = 0; t < 12; ++t) alt.push_back({static_cast<Spin>(t % 2 ? -1 : 1)});
  EXPECT_DOUBLE_EQ(local_magnetization(alt, 2)[0], 0.0);
  try {
    local_magnetization(alt, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSamples);
  }
}

TEST(Summary, MeanMedianRange) {
  const std::vector<double> v{0.5, -0.25, 1.0, 0.0};
  const auto s = summarize(v);
  EXPECT_NEAR(s.mean, 0.3125, 1e-15);
  EXPECT_DOUBLE_EQ(s.median, 0.25);
  EXPECT_DOUBLE_EQ(s.min, -0.25);
  EXPECT_DOUBLE_EQ(s.max, 1.0);
}

TEST(MagnetizationCsv, SingleVertexHasTwoLines) {
  const auto g = build_graph(std::span<const EdgeRecord>{}, std::vector<std::string>{"Solo"});
  const ParameterSpec p = ParameterSpec::binary("sv");
  SamplerConfig cfg{Beta(1.0), 100, 10, 3, 10};
  const auto report = run_chain(g, SpinConfiguration({p}, 1), IsingModel{p}, cfg);
  const auto csv = magnetization_csv(report.languages, report.tracks[0]);
  EXPECT_EQ(count_lines(csv), 2u);
  EXPECT_EQ(csv.rfind("language,local_magnetization\nSolo,", 0), 0u);

  const auto dir = scratch_dir("single");
  write_magnetization_csv(report.languages, report.tracks[0], (dir / "m.csv").string());
  EXPECT_EQ(read_file((dir / "m.csv").string()), csv);
}

TEST(Dot, ColoringRule) {
  EXPECT_EQ(vertex_color(0.3), "red");
  EXPECT_EQ(vertex_color(-1e-9), "blue");
  EXPECT_EQ(vertex_color(0.0), "gray");
  EXPECT_EQ(vertex_color(std::nan("")), "gray");
  const auto g = build_graph({{"A", "B", 0.5}});
  const std::vector<double> coloring{0.0, 1.0};
  const auto dot = graph_dot(g, coloring);
  EXPECT_NE(dot.find("\"A\" [style=filled, color=gray]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"A\" -> \"B\" [label=\"0.5\"]"), std::string::npos) << dot;
}

TEST(Dot, DefinitenessInitialColors) {
  const auto sc = load_scenario("definiteness3");
  const auto dot = graph_dot(sc.graph, spin_coloring(sc.config, 0));
  EXPECT_NE(dot.find("\"English\" [style=filled, color=red]"), std::string::npos);
  EXPECT_NE(dot.find("\"Russian\" [style=filled, color=blue]"), std::string::npos);
  EXPECT_NE(dot.find("\"Bulgarian\" [style=filled, color=red]"), std::string::npos);
  std::size_t nodes = 0;
  for (std::size_t pos = 0; (pos = dot.find("style=filled", pos)) != std::string::npos; ++pos) ++nodes;
  EXPECT_EQ(nodes, 3u);
  const auto p2 = graph_dot(sc.graph, spin_coloring(sc.config, 1));
  EXPECT_NE(p2.find("\"Russian\" [style=filled, color=gray]"), std::string::npos);
}

TEST(Timeseries, RoundTripIsExact) {
  const auto sc = load_scenario("deixis4", 0.7);
  SamplerConfig cfg{Beta(1.3), 5000, 500, 8, 7};
  const auto report = run_chain(sc.graph, sc.config, EntailModel{sc.pair}, cfg);
  for (const auto& track : report.tracks) {
    const auto back = parse_timeseries_csv(timeseries_csv(track));
    ASSERT_EQ(back.size(), track.avg_spin_series.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].step, track.avg_spin_series[i].step);
      EXPECT_EQ(back[i].avg_spin, track.avg_spin_series[i].avg_spin);
    }
    EXPECT_EQ(back.size(), (cfg.steps + cfg.record_every - 1) / cfg.record_every);
    double sum = 0.0;
    for (double m : track.local_magnetization) {
      EXPECT_GE(m, -1.0);
      EXPECT_LE(m, 1.0);
      sum += m;
    }
    EXPECT_NEAR(track.summary.mean, sum / static_cast<double>(track.local_magnetization.size()), 1e-12);
  }
}

TEST(Timeseries, ArbitraryDoublesSurvive) {
  ParameterTrack track{ParameterSpec::binary("x"), {}, {}, {}};
  const double values[] = {1.0 / 3.0, -0.1, 5e-300, -0.0, 0.9999999999999999};
  std::uint64_t step = 0;
  for (double v : values) track.avg_spin_series.push_back({step++, v});
  const auto back = parse_timeseries_csv(timeseries_csv(track));
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], track.avg_spin_series[i]);
}

TEST(WriteText, ReportsPath) {
  try {
    write_text("/nonexistent-dir/x.csv", "a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}
