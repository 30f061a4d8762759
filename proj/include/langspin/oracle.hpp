#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <variant>
#include <vector>

#include "langspin/dynamics.hpp"
#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/hamiltonian.hpp"
#include "langspin/spin.hpp"

namespace langspin {

/// Kronecker-delta edge energy over the listed parameters (any arity). Oracle only.
struct PottsModel {
  std::vector<ParameterSpec> parameters;
};

using ExactModel = std::variant<IsingModel, PottsModel, EntailModel>;

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 20;

inline std::vector<ParameterSpec> model_parameters(const ExactModel& model) {
  return std::visit(
      [](const auto& m) -> std::vector<ParameterSpec> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IsingModel>) return {m.parameter};
        else if constexpr (std::is_same_v<M, PottsModel>) return m.parameters;
        else return {m.pair.p1(), m.pair.p2()};
      },
      model);
}

inline double exact_model_energy(const LanguageGraph& g, const ExactModel& model, const SpinConfiguration& s) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IsingModel>) return ising_energy(g, s, m.parameter);
        else if constexpr (std::is_same_v<M, PottsModel>) return potts_edge_energy(g, s, m.parameters);
        else return entail_total_energy(g, m.pair, s);
      },
      model);
}

/// Mixed-radix indexing of the state space. Site k = p * N + l carries digit k with
/// radix q_p; digit d maps to the d-th allowed value (-1, +1 or -1, 0, +1).
class StateSpace {
 public:
  StateSpace(std::vector<ParameterSpec> params, std::size_t languages, std::uint64_t cap = kDefaultStateCap)
      : params_(std::move(params)), languages_(languages) {
    long double count = 1;
    for (const auto& p : params_) {
      require_valid_arity(p);
      for (std::size_t l = 0; l < languages_; ++l) {
        count *= p.arity;
        radices_.push_back(static_cast<std::uint8_t>(p.arity));
      }
    }
    if (count > static_cast<long double>(cap)) {
      throw Error(ErrorCode::TooLarge, "state count " + std::to_string(static_cast<double>(count)) + " exceeds cap " + std::to_string(cap));
    }
    size_ = static_cast<std::uint64_t>(count);
  }

  std::uint64_t size() const noexcept { return size_; }
  std::size_t site_count() const noexcept { return radices_.size(); }
  std::size_t language_count() const noexcept { return languages_; }
  std::span<const ParameterSpec> parameters() const noexcept { return params_; }

  SpinConfiguration decode(std::uint64_t index) const {
    SpinConfiguration s(params_, languages_);
    decode_into(index, s);
    return s;
  }

  void decode_into(std::uint64_t index, SpinConfiguration& s) const {
    for (std::size_t p = 0; p < params_.size(); ++p) {
      const auto values = params_[p].values();
      auto row = s.mutable_row(p);
      for (std::size_t l = 0; l < languages_; ++l) {
        row[l] = values[index % params_[p].arity];
        index /= params_[p].arity;
      }
    }
  }

  std::uint64_t encode(const SpinConfiguration& s) const {
    std::uint64_t index = 0;
    for (std::size_t p = params_.size(); p-- > 0;) {
      const auto values = params_[p].values();
      const auto row = s.row(s.index_of(params_[p]));
      for (std::size_t l = languages_; l-- > 0;) {
        const auto digit = static_cast<std::uint64_t>(std::find(values.begin(), values.end(), row[l]) - values.begin());
        if (digit >= values.size()) throw Error(ErrorCode::InvalidSpin, "value outside allowed set");
        index = index * static_cast<std::uint64_t>(params_[p].arity) + digit;
      }
    }
    return index;
  }

 private:
  std::vector<ParameterSpec> params_;
  std::size_t languages_ = 0;
  std::vector<std::uint8_t> radices_;
  std::uint64_t size_ = 0;
};

/// Exact Gibbs measure over the full state space. State i is space.decode(i).
struct ExactDistribution {
  StateSpace space;
  std::vector<double> energies;
  std::vector<double> probabilities;
  double log_partition = 0.0;

  SpinConfiguration state(std::uint64_t i) const { return space.decode(i); }
  std::uint64_t size() const noexcept { return space.size(); }
};

/// Boltzmann weights normalized with log-sum-exp: p_i = exp(-beta H_i) / Z.
inline void normalize_gibbs(std::span<const double> energies, double beta, std::vector<double>& probabilities, double& log_partition) {
  const double h_min = *std::min_element(energies.begin(), energies.end());
  probabilities.resize(energies.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    probabilities[i] = std::exp(-beta * (energies[i] - h_min));
    sum += probabilities[i];
  }
  for (double& p : probabilities) p /= sum;
  log_partition = -beta * h_min + std::log(sum);
}

inline ExactDistribution enumerate(const LanguageGraph& g, const ExactModel& model, Beta beta,
                                   std::uint64_t cap = kDefaultStateCap) {
  if (beta.is_infinite()) throw Error(ErrorCode::InvalidArgument, "exact enumeration needs a finite beta");
  ExactDistribution d{StateSpace(model_parameters(model), g.size(), cap), {}, {}, 0.0};
  d.energies.resize(d.space.size());
  SpinConfiguration s(model_parameters(model), g.size());
  for (std::uint64_t i = 0; i < d.space.size(); ++i) {
    d.space.decode_into(i, s);
    d.energies[i] = exact_model_energy(g, model, s);
  }
  normalize_gibbs(d.energies, beta.value(), d.probabilities, d.log_partition);
  return d;
}

inline double exact_expectation(const ExactDistribution& d, const std::function<double(const SpinConfiguration&)>& observable) {
  SpinConfiguration s = d.space.decode(0);
  double e = 0.0;
  for (std::uint64_t i = 0; i < d.size(); ++i) {
    d.space.decode_into(i, s);
    e += d.probabilities[i] * observable(s);
  }
  return e;
}

struct Transition {
  std::uint64_t to = 0;
  double probability = 0.0;
  bool possible = false;  // positive probability at any finite beta
};

/// Off-diagonal row of the sampler's transition kernel at `state`: uniform site
/// proposal composed with the samplers' acceptance probabilities.
inline std::vector<Transition> kernel_row(const LanguageGraph& g, const Model& model, const StateSpace& space,
                                          std::uint64_t state, Beta beta) {
  SpinConfiguration s = space.decode(state);
  std::vector<Transition> row;
  const std::size_t n = g.size();
  auto to_index = [&](std::size_t p, std::size_t l, Spin value) {
    SpinConfiguration t = s;
    t.set(LanguageId{l}, p, value);
    return space.encode(t);
  };
  if (const auto* ising = std::get_if<IsingModel>(&model)) {
    const auto p = s.index_of(ising->parameter);
    for (std::size_t v = 0; v < n; ++v) {
      const double delta = ising_delta(g, s, ising->parameter, LanguageId{v});
      row.push_back({to_index(p, v, static_cast<Spin>(-s.get(LanguageId{v}, p))),
                     acceptance_probability(delta, beta) / static_cast<double>(n), true});
    }
    return row;
  }
  const auto& pair = std::get<EntailModel>(model).pair;
  const auto p1 = s.index_of(pair.p1());
  const auto p2 = s.index_of(pair.p2());
  const auto r1 = s.row(p1);
  const auto r2 = s.row(p2);
  const double site_weight = 1.0 / static_cast<double>(2 * n);
  for (std::size_t l = 0; l < n; ++l) {
    const Spin flipped = static_cast<Spin>(-r1[l]);
    const double delta = entail_site_delta(g, pair, r1, r2, l, 1, flipped);
    row.push_back({to_index(p1, l, flipped), acceptance_probability(delta, beta) * site_weight, true});
  }
  for (std::size_t l = 0; l < n; ++l) {
    const Spin up = cycle_next(r2[l]);
    const Spin down = cycle_prev(r2[l]);
    const double d_up = entail_site_delta(g, pair, r1, r2, l, 2, up);
    const double d_down = entail_site_delta(g, pair, r1, r2, l, 2, down);
    const double accept = acceptance_probability(entail_min_delta(0.0, d_up, d_down), beta) * site_weight;
    const double share_up = d_up < d_down ? 1.0 : (d_up == d_down ? 0.5 : 0.0);
    row.push_back({to_index(p2, l, up), accept * share_up, share_up > 0.0});
    row.push_back({to_index(p2, l, down), accept * (1.0 - share_up), share_up < 1.0});
  }
  return row;
}

inline double kernel_probability(const LanguageGraph& g, const Model& model, const StateSpace& space,
                                 std::uint64_t from, std::uint64_t to, Beta beta) {
  double p = 0.0;
  for (const auto& t : kernel_row(g, model, space, from, beta)) {
    if (t.to == to) p += t.probability;
  }
  return p;
}

struct DetailedBalanceReport {
  double max_violation = 0.0;
  std::uint64_t worst_from = 0;
  std::uint64_t worst_to = 0;
  std::uint64_t pairs_checked = 0;
  bool within_tolerance = true;
};

/// Scans every ordered pair of single-site-adjacent states and returns the largest
/// |P(s) K(s->t) - P(t) K(t->s)| against the exact Gibbs measure.
inline DetailedBalanceReport detailed_balance_check(const LanguageGraph& g, const Model& model, Beta beta, double tolerance,
                                                    std::uint64_t cap = kDefaultStateCap) {
  const ExactModel exact = std::visit([](const auto& m) -> ExactModel { return m; }, model);
  const ExactDistribution d = enumerate(g, exact, beta, cap);
  DetailedBalanceReport report;
  for (std::uint64_t s = 0; s < d.size(); ++s) {
    for (const auto& t : kernel_row(g, model, d.space, s, beta)) {
      if (t.to == s) continue;
      const double forward = d.probabilities[s] * t.probability;
      const double backward = d.probabilities[t.to] * kernel_probability(g, model, d.space, t.to, s, beta);
      const double violation = std::abs(forward - backward);
      ++report.pairs_checked;
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_from = s;
        report.worst_to = t.to;
      }
    }
  }
  report.within_tolerance = report.max_violation <= tolerance;
  return report;
}

/// True iff the graph of possible transitions on the state space is strongly connected.
inline bool reachability_check(const LanguageGraph& g, const Model& model, Beta beta,
                               std::uint64_t cap = kDefaultStateCap) {
  if (beta.is_infinite()) throw Error(ErrorCode::InvalidArgument, "reachability is defined for finite beta only");
  const StateSpace space(model_parameters(std::visit([](const auto& m) -> ExactModel { return m; }, model)), g.size(), cap);
  const std::uint64_t count = space.size();
  std::vector<std::vector<std::uint64_t>> forward(count), backward(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    for (const auto& t : kernel_row(g, model, space, s, beta)) {
      if (!t.possible || t.to == s) continue;
      forward[s].push_back(t.to);
      backward[t.to].push_back(s);
    }
  }
  auto all_reached = [count](const std::vector<std::vector<std::uint64_t>>& adj) {
    std::vector<char> seen(count, 0);
    std::queue<std::uint64_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::uint64_t reached = 1;
    while (!frontier.empty()) {
      const auto s = frontier.front();
      frontier.pop();
      for (auto t : adj[s]) {
        if (!seen[t]) {
          seen[t] = 1;
          ++reached;
          frontier.push(t);
        }
      }
    }
    return reached == count;
  };
  return all_reached(forward) && all_reached(backward);
}

}  // namespace langspin
