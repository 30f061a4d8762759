#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "langspin/dynamics.hpp"
#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/ingest.hpp"
#include "langspin/stats.hpp"

namespace langspin {

/// %.17g: enough digits for an exact double round trip.
inline std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline void write_text(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

inline std::string timeseries_csv(const ParameterTrack& track) {
  std::string out = "step,avg_spin\n";
  for (const auto& p : track.avg_spin_series) out += std::to_string(p.step) + "," + format_real(p.avg_spin) + "\n";
  return out;
}

inline std::string magnetization_csv(std::span<const std::string> languages, const ParameterTrack& track) {
  std::string out = "language,local_magnetization\n";
  for (std::size_t i = 0; i < languages.size(); ++i) out += languages[i] + "," + format_real(track.local_magnetization.at(i)) + "\n";
  return out;
}

/// Final joint configuration: one row per language, one column per parameter.
inline std::string configuration_csv(std::span<const std::string> languages, const SpinConfiguration& config) {
  std::string out = "language";
  for (const auto& p : config.parameters()) out += "," + p.id;
  out += "\n";
  for (std::size_t l = 0; l < languages.size(); ++l) {
    out += languages[l];
    for (std::size_t p = 0; p < config.parameter_count(); ++p) out += "," + std::to_string(config.get(LanguageId{l}, p));
    out += "\n";
  }
  return out;
}

inline void write_csv(const ParameterTrack& track, const std::string& path) { write_text(path, timeseries_csv(track)); }

inline void write_magnetization_csv(std::span<const std::string> languages, const ParameterTrack& track, const std::string& path) {
  write_text(path, magnetization_csv(languages, track));
}

inline std::vector<SeriesPoint> parse_timeseries_csv(std::string_view text) {
  const auto lines = csv::read_lines(text);
  if (lines.empty() || lines[0].fields != std::vector<std::string>{"step", "avg_spin"}) {
    throw Error(ErrorCode::FormatError, "timeseries header must be step,avg_spin");
  }
  std::vector<SeriesPoint> series;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& f = lines[i].fields;
    if (f.size() != 2) throw csv::format_error(lines[i].number, "expected step,avg_spin");
    std::uint64_t step = 0;
    auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), step);
    const auto value = csv::parse_double(f[1]);
    if (ec != std::errc() || ptr != f[0].data() + f[0].size() || !value) throw csv::format_error(lines[i].number, "bad number");
    series.push_back({step, *value});
  }
  return series;
}

/// red for > 0, blue for < 0, gray for 0 or undefined.
inline std::string_view vertex_color(double value) {
  if (std::isnan(value) || value == 0.0) return "gray";
  return value > 0.0 ? "red" : "blue";
}

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string graph_dot(const LanguageGraph& g, std::span<const double> coloring, std::string_view title = "languages") {
  if (coloring.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "coloring does not cover every vertex");
  std::string out = "digraph " + dot_quote(title) + " {\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    out += "  " + dot_quote(g.names()[v]) + " [style=filled, color=" + std::string(vertex_color(coloring[v])) + "];\n";
  }
  for (const auto& e : g.edges()) {
    out += "  " + dot_quote(g.name(e.src)) + " -> " + dot_quote(g.name(e.dst)) + " [label=\"" + csv::format_double(e.weight) + "\"];\n";
  }
  return out + "}\n";
}

inline void write_dot(const LanguageGraph& g, std::span<const double> coloring, const std::string& path,
                      std::string_view title = "languages") {
  write_text(path, graph_dot(g, coloring, title));
}

/// Spin row of one parameter as doubles, for coloring.
inline std::vector<double> spin_coloring(const SpinConfiguration& s, std::size_t param) {
  const auto row = s.row(param);
  return std::vector<double>(row.begin(), row.end());
}

}  // namespace langspin
