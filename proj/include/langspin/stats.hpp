#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "langspin/error.hpp"
#include "langspin/spin.hpp"

namespace langspin {

struct SeriesPoint {
  std::uint64_t step = 0;  // number of steps taken before the snapshot
  double avg_spin = 0.0;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct MagnetizationSummary {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per-parameter output of a run: the average-spin series and the per-vertex
/// time-averaged spin over the post-burn-in window.
struct ParameterTrack {
  ParameterSpec parameter;
  std::vector<SeriesPoint> avg_spin_series;
  std::vector<double> local_magnetization;  // indexed by LanguageId::index
  MagnetizationSummary summary;
};

inline MagnetizationSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InsufficientSamples, "no values to summarize");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const std::size_t n = sorted.size();
  MagnetizationSummary s;
  s.mean = sum / static_cast<double>(n);
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

/// Per-vertex mean spin over trajectory[burn_in..]. Each trajectory entry is one
/// parameter's spin row at one step.
inline std::vector<double> local_magnetization(std::span<const std::vector<Spin>> trajectory, std::size_t burn_in) {
  if (trajectory.size() <= burn_in) {
    throw Error(ErrorCode::InsufficientSamples,
                "trajectory of length " + std::to_string(trajectory.size()) + " has no samples after burn-in " + std::to_string(burn_in));
  }
  const std::size_t n = trajectory[burn_in].size();
  std::vector<std::int64_t> sums(n, 0);
  for (std::size_t t = burn_in; t < trajectory.size(); ++t) {
    if (trajectory[t].size() != n) throw Error(ErrorCode::InvalidArgument, "ragged trajectory");
    for (std::size_t v = 0; v < n; ++v) sums[v] += trajectory[t][v];
  }
  const auto window = static_cast<double>(trajectory.size() - burn_in);
  std::vector<double> m(n);
  for (std::size_t v = 0; v < n; ++v) m[v] = static_cast<double>(sums[v]) / window;
  return m;
}

}  // namespace langspin
