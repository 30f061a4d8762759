#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/hamiltonian.hpp"
#include "langspin/rng.hpp"
#include "langspin/spin.hpp"
#include "langspin/stats.hpp"

namespace langspin {

/// Inverse temperature. +infinity is a first-class value (zero-temperature quench).
class Beta {
 public:
  constexpr Beta() = default;
  explicit Beta(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  }

  static Beta infinite() { return Beta(std::numeric_limits<double>::infinity()); }

  /// beta = 1/T; T must be finite and > 0. Use infinite() for T = 0.
  static Beta from_temperature(double temperature) {
    if (!std::isfinite(temperature) || temperature <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "temperature must be finite and positive");
    }
    return Beta(1.0 / temperature);
  }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }

  friend bool operator==(Beta, Beta) = default;

 private:
  double value_ = 1.0;
};

struct SamplerConfig {
  Beta beta;
  std::uint64_t steps = 1'000'000;
  std::uint64_t burn_in = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t record_every = 1;

  /// Burn-in defaults to a tenth of the step budget.
  static SamplerConfig with_default_burn_in(Beta beta, std::uint64_t steps, std::uint64_t seed, std::uint64_t record_every = 1) {
    return SamplerConfig{beta, steps, steps / 10, seed, record_every};
  }

  void validate() const {
    if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    if (burn_in >= steps) throw Error(ErrorCode::InvalidArgument, "burn_in must be smaller than steps");
    if (record_every == 0) throw Error(ErrorCode::InvalidArgument, "record_every must be positive");
  }
};

/// min(1, exp(-beta * delta)); exactly 0 for uphill moves at beta = +infinity.
inline double acceptance_probability(double delta_h, Beta beta) {
  if (std::isnan(delta_h)) throw Error(ErrorCode::InvalidEnergy, "energy change is NaN");
  if (delta_h <= 0.0) return 1.0;
  if (beta.is_infinite()) return 0.0;
  return std::exp(-beta.value() * delta_h);
}

/// Metropolis rule: accept iff delta_h <= 0 or u < exp(-beta * delta_h), with u in [0, 1).
inline bool metropolis_accept(double delta_h, Beta beta, double u) {
  return delta_h <= 0.0 || u < acceptance_probability(delta_h, beta);
}

/// Energy change used by the ternary rule: min(H(s+1), H(s-1)) - H(s).
inline double entail_min_delta(double h_current, double h_plus, double h_minus) {
  for (double h : {h_current, h_plus, h_minus}) {
    if (!std::isfinite(h)) throw Error(ErrorCode::InvalidEnergy, "non-finite energy in ternary acceptance");
  }
  return std::min(h_plus, h_minus) - h_current;
}

inline bool entail_accept(double h_current, double h_plus, double h_minus, Beta beta, double u) {
  return metropolis_accept(entail_min_delta(h_current, h_plus, h_minus), beta, u);
}

/// P(beta) = 1 - exp(-beta * gamma) / 2: probability a parameter sits at its
/// preferred value under noise. Reporting only; it does not drive acceptance.
inline double noise_probability(Beta beta, double gamma = 1.0) {
  if (!std::isfinite(gamma) || gamma <= 0.0) throw Error(ErrorCode::InvalidArgument, "gamma must be finite and positive");
  if (beta.is_infinite()) return 1.0;
  return 1.0 - std::exp(-beta.value() * gamma) / 2.0;
}

/// Per-(language, parameter) noise exponents, defaulting to gamma = 1.
class NoiseModel {
 public:
  void set_gamma(const std::string& language, const std::string& parameter, double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0) throw Error(ErrorCode::InvalidArgument, "gamma must be finite and positive");
    gammas_[{language, parameter}] = gamma;
  }
  double gamma(const std::string& language, const std::string& parameter) const {
    auto it = gammas_.find({language, parameter});
    return it == gammas_.end() ? 1.0 : it->second;
  }
  double probability(Beta beta, const std::string& language, const std::string& parameter) const {
    return noise_probability(beta, gamma(language, parameter));
  }

 private:
  std::map<std::pair<std::string, std::string>, double> gammas_;
};

/// Next/previous value on the ternary cycle -1 -> 0 -> +1 -> -1.
constexpr Spin cycle_next(Spin s) { return s == 1 ? Spin{-1} : static_cast<Spin>(s + 1); }
constexpr Spin cycle_prev(Spin s) { return s == -1 ? Spin{1} : static_cast<Spin>(s - 1); }

struct ChainState {
  SpinConfiguration config;
  double energy = 0.0;
  std::uint64_t step = 0;
  Rng rng{0};
};

struct StepOutcome {
  LanguageId language;
  std::size_t parameter = 0;  // index into the configuration's parameters
  Spin from = 0;
  Spin to = 0;
  double delta = 0.0;  // energy change actually applied (0 when rejected)
  bool accepted = false;
};

/// Single-spin-flip Metropolis step for one binary parameter.
inline StepOutcome step_ising(const LanguageGraph& g, ChainState& chain, std::size_t param, Beta beta) {
  auto spins = chain.config.mutable_row(param);
  const std::size_t v = chain.rng.index(g.size());
  const double delta = detail::ising_flip_delta(g, spins, v);
  StepOutcome out{LanguageId{v}, param, spins[v], spins[v], 0.0, false};
  const bool accept = delta <= 0.0 || (!beta.is_infinite() && chain.rng.uniform() < acceptance_probability(delta, beta));
  if (accept) {
    spins[v] = static_cast<Spin>(-spins[v]);
    chain.energy += delta;
    out.to = spins[v];
    out.delta = delta;
    out.accepted = true;
  }
  ++chain.step;
  return out;
}

inline StepOutcome step_ising(const LanguageGraph& g, ChainState& chain, const ParameterSpec& p, Beta beta) {
  detail::require_binary(p);
  return step_ising(g, chain, chain.config.index_of(p), beta);
}

/// One step of the coupled binary/ternary dynamics. A site is drawn uniformly from
/// the 2N (language, parameter) sites. Binary sites use the Metropolis flip rule;
/// ternary sites evaluate both cycle neighbours, accept with the min-delta rule and
/// move to the lower-energy candidate (coin flip on ties).
inline StepOutcome step_entail(const LanguageGraph& g, ChainState& chain, const EntailmentPair& pair,
                               std::size_t p1, std::size_t p2, Beta beta) {
  const std::size_t n = g.size();
  auto row1 = chain.config.mutable_row(p1);
  auto row2 = chain.config.mutable_row(p2);
  const std::size_t site = chain.rng.index(2 * n);
  const std::size_t l = site % n;
  const int which = site < n ? 1 : 2;

  StepOutcome out;
  out.language = LanguageId{l};
  out.parameter = which == 1 ? p1 : p2;
  ++chain.step;

  if (which == 1) {
    const Spin next = static_cast<Spin>(-row1[l]);
    const double delta = entail_site_delta(g, pair, row1, row2, l, 1, next);
    out.from = out.to = row1[l];
    const bool accept = delta <= 0.0 || (!beta.is_infinite() && chain.rng.uniform() < acceptance_probability(delta, beta));
    if (accept) {
      row1[l] = next;
      chain.energy += delta;
      out.to = next;
      out.delta = delta;
      out.accepted = true;
    }
    return out;
  }

  const Spin current = row2[l];
  const Spin up = cycle_next(current);
  const Spin down = cycle_prev(current);
  const double d_up = entail_site_delta(g, pair, row1, row2, l, 2, up);
  const double d_down = entail_site_delta(g, pair, row1, row2, l, 2, down);
  out.from = out.to = current;
  const double delta = entail_min_delta(0.0, d_up, d_down);
  const bool accept = delta <= 0.0 || (!beta.is_infinite() && chain.rng.uniform() < acceptance_probability(delta, beta));
  if (!accept) return out;
  Spin target = d_up < d_down ? up : down;
  if (d_up == d_down) target = chain.rng.coin() ? up : down;
  const double applied = target == up ? d_up : d_down;
  row2[l] = target;
  chain.energy += applied;
  out.to = target;
  out.delta = applied;
  out.accepted = true;
  return out;
}

inline StepOutcome step_entail(const LanguageGraph& g, ChainState& chain, const EntailmentPair& pair, Beta beta) {
  return step_entail(g, chain, pair, chain.config.index_of(pair.p1()), chain.config.index_of(pair.p2()), beta);
}

struct IsingModel {
  ParameterSpec parameter;
};

struct EntailModel {
  EntailmentPair pair;
};

using Model = std::variant<IsingModel, EntailModel>;

inline double model_energy(const LanguageGraph& g, const Model& model, const SpinConfiguration& s) {
  if (const auto* ising = std::get_if<IsingModel>(&model)) return ising_energy(g, s, ising->parameter);
  return entail_total_energy(g, std::get<EntailModel>(model).pair, s);
}

struct RunReport {
  std::vector<std::string> languages;
  std::vector<ParameterTrack> tracks;  // one per model parameter, in model order
  SpinConfiguration initial_config;
  SpinConfiguration final_config;
  SamplerConfig config;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  std::uint64_t accepted = 0;
  /// Post-burn-in time average of the fraction of languages in an entailment ground state.
  std::optional<double> entailment_satisfied_fraction;
  double wall_seconds = 0.0;

  double acceptance_rate() const { return static_cast<double>(accepted) / static_cast<double>(config.steps); }
};

/// Observer called after every step with the updated chain and the step outcome.
struct NoObserver {
  void operator()(const ChainState&, const StepOutcome&) const noexcept {}
};

/// Runs `cfg.steps` steps from `initial`. The average-spin series snapshots the state
/// at steps 0, r, 2r, ... (< steps); local magnetizations average the states after
/// steps burn_in+1 .. steps. Deterministic for a given (seed, inputs).
template <typename Observer = NoObserver>
RunReport run_chain(const LanguageGraph& g, const SpinConfiguration& initial, const Model& model,
                    const SamplerConfig& cfg, Observer&& observe = {}) {
  cfg.validate();
  if (initial.language_count() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "configuration does not cover the graph's languages");
  }
  if (g.size() == 0) throw Error(ErrorCode::InvalidArgument, "graph has no languages");
  initial.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> params;
  const EntailmentPair* pair = nullptr;
  if (const auto* ising = std::get_if<IsingModel>(&model)) {
    detail::require_binary(ising->parameter);
    params.push_back(initial.index_of(ising->parameter));
  } else {
    pair = &std::get<EntailModel>(model).pair;
    if (pair->couplings().size() != g.size()) {
      throw Error(ErrorCode::InvalidArgument, "entailment couplings do not cover every language");
    }
    params.push_back(initial.index_of(pair->p1()));
    params.push_back(initial.index_of(pair->p2()));
  }

  const std::size_t n = g.size();
  ChainState chain{initial, model_energy(g, model, initial), 0, Rng(cfg.seed)};
  RunReport report;
  report.languages.assign(g.names().begin(), g.names().end());
  report.initial_config = initial;
  report.config = cfg;
  report.initial_energy = chain.energy;

  struct Tracker {
    std::int64_t row_sum = 0;
    std::vector<std::int64_t> window_sum;
    std::vector<std::uint64_t> counted_until;
  };
  std::vector<Tracker> trackers(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto row = chain.config.row(params[k]);
    for (Spin s : row) trackers[k].row_sum += s;
    trackers[k].window_sum.assign(n, 0);
    trackers[k].counted_until.assign(n, cfg.burn_in);
    ParameterTrack track;
    track.parameter = chain.config.parameter(params[k]);
    track.avg_spin_series.reserve(static_cast<std::size_t>((cfg.steps + cfg.record_every - 1) / cfg.record_every));
    report.tracks.push_back(std::move(track));
  }

  std::int64_t satisfied = 0;
  std::int64_t satisfied_window = 0;
  if (pair) {
    auto r1 = chain.config.row(params[0]);
    auto r2 = chain.config.row(params[1]);
    for (std::size_t l = 0; l < n; ++l) satisfied += satisfies_entailment(r1[l], r2[l]) ? 1 : 0;
  }

  const auto dn = static_cast<double>(n);
  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    if (t % cfg.record_every == 0) {
      for (std::size_t k = 0; k < params.size(); ++k) {
        report.tracks[k].avg_spin_series.push_back({t, static_cast<double>(trackers[k].row_sum) / dn});
      }
    }
    const StepOutcome out = pair ? step_entail(g, chain, *pair, params[0], params[1], cfg.beta)
                                 : step_ising(g, chain, params[0], cfg.beta);
    const std::uint64_t step = t + 1;
    if (out.accepted) {
      ++report.accepted;
      const std::size_t k = out.parameter == params[0] ? 0 : 1;
      auto& tr = trackers[k];
      const std::size_t v = out.language.index;
      tr.row_sum += out.to - out.from;
      if (step > cfg.burn_in) {
        tr.window_sum[v] += static_cast<std::int64_t>(out.from) * static_cast<std::int64_t>(step - 1 - tr.counted_until[v]);
        tr.counted_until[v] = step - 1;
      }
      if (pair) {
        const auto r1 = chain.config.row(params[0]);
        const auto r2 = chain.config.row(params[1]);
        const Spin old1 = k == 0 ? out.from : r1[v];
        const Spin old2 = k == 1 ? out.from : r2[v];
        satisfied += (satisfies_entailment(r1[v], r2[v]) ? 1 : 0) - (satisfies_entailment(old1, old2) ? 1 : 0);
      }
    }
    if (pair && step > cfg.burn_in) satisfied_window += satisfied;
    observe(std::as_const(chain), out);
  }

  const auto window = static_cast<double>(cfg.steps - cfg.burn_in);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& tr = trackers[k];
    auto row = chain.config.row(params[k]);
    auto& track = report.tracks[k];
    track.local_magnetization.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      tr.window_sum[v] += static_cast<std::int64_t>(row[v]) * static_cast<std::int64_t>(cfg.steps - tr.counted_until[v]);
      track.local_magnetization[v] = static_cast<double>(tr.window_sum[v]) / window;
    }
    track.summary = summarize(track.local_magnetization);
  }
  if (pair) report.entailment_satisfied_fraction = static_cast<double>(satisfied_window) / (window * dn);

  report.final_config = std::move(chain.config);
  report.final_energy = chain.energy;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace langspin
