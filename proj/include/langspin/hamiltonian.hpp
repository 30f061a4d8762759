#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/spin.hpp"

namespace langspin {

/// A binary parameter p1 that entails a ternary parameter p2, with a per-language
/// coupling J_l >= 0 penalizing configurations that violate the entailment.
class EntailmentPair {
 public:
  EntailmentPair(ParameterSpec p1, ParameterSpec p2, std::vector<double> couplings)
      : p1_(std::move(p1)), p2_(std::move(p2)), couplings_(std::move(couplings)) {
    if (p1_.arity != 2) throw Error(ErrorCode::ArityMismatch, "entailing parameter '" + p1_.id + "' must be binary");
    if (p2_.arity != 3) throw Error(ErrorCode::ArityMismatch, "entailed parameter '" + p2_.id + "' must be ternary");
    for (double j : couplings_) {
      if (!std::isfinite(j) || j < 0.0) {
        throw Error(ErrorCode::InvalidWeight, "entailment coupling must be finite and >= 0, got " + std::to_string(j));
      }
    }
  }

  const ParameterSpec& p1() const noexcept { return p1_; }
  const ParameterSpec& p2() const noexcept { return p2_; }
  std::span<const double> couplings() const noexcept { return couplings_; }
  double coupling(LanguageId l) const { return couplings_.at(l.index); }

  EntailmentPair with_uniform_coupling(double j) const {
    return EntailmentPair(p1_, p2_, std::vector<double>(couplings_.size(), j));
  }

 private:
  ParameterSpec p1_;
  ParameterSpec p2_;
  std::vector<double> couplings_;
};

namespace detail {

inline void require_binary(const ParameterSpec& p) {
  if (p.arity != 2) throw Error(ErrorCode::ArityMismatch, "Ising energy needs a binary parameter, '" + p.id + "' has arity " + std::to_string(p.arity));
}

inline void require_values(const SpinConfiguration& s, std::size_t p) {
  const auto& spec = s.parameter(p);
  for (Spin v : s.row(p)) {
    if (!spec.allows(v)) throw Error(ErrorCode::InvalidSpin, "value " + std::to_string(v) + " not allowed for '" + spec.id + "'");
  }
}

/// Sum over neighbors of (J_vu + J_uv) * S_u.
inline double local_field(const LanguageGraph& g, std::span<const Spin> spins, std::size_t v) {
  double h = 0.0;
  for (const auto& c : g.couplings(LanguageId{v})) h += c.weight * spins[c.neighbor];
  return h;
}

inline double ising_flip_delta(const LanguageGraph& g, std::span<const Spin> spins, std::size_t v) {
  return 2.0 * spins[v] * local_field(g, spins, v);
}

/// Change of the Kronecker-delta edge energy when site v moves to `next`.
inline double potts_site_delta(const LanguageGraph& g, std::span<const Spin> spins, std::size_t v, Spin next) {
  const Spin current = spins[v];
  double d = 0.0;
  for (const auto& c : g.couplings(LanguageId{v})) {
    const Spin other = spins[c.neighbor];
    d -= c.weight * (static_cast<int>(next == other) - static_cast<int>(current == other));
  }
  return d;
}

/// X = 0 for S_p1 = +1 and 1 for S_p1 = -1; Y = |S_p2|.
constexpr int entail_x(Spin s1) { return s1 == 1 ? 0 : 1; }
constexpr int entail_y(Spin s2) { return s2 == 0 ? 0 : 1; }

/// 1 when the (p1, p2) pair is in an excited (entailment-violating) state.
constexpr int entail_violation(Spin s1, Spin s2) { return entail_x(s1) == entail_y(s2) ? 1 : 0; }

}  // namespace detail

/// True for the ground vertex states (+1, +-1) and (-1, 0).
constexpr bool satisfies_entailment(Spin s1, Spin s2) { return detail::entail_violation(s1, s2) == 0; }

/// H_p = -sum over directed edges (l, l') of J_ll' S_l S_l'.
inline double ising_energy(const LanguageGraph& g, const SpinConfiguration& s, const ParameterSpec& p) {
  detail::require_binary(p);
  const auto pi = s.index_of(p);
  detail::require_values(s, pi);
  const auto spins = s.row(pi);
  double h = 0.0;
  for (const auto& e : g.edges()) h -= e.weight * spins[e.src.index] * spins[e.dst.index];
  return h;
}

/// H_p(after flipping v) - H_p(s).
inline double ising_delta(const LanguageGraph& g, const SpinConfiguration& s, const ParameterSpec& p, LanguageId v) {
  detail::require_binary(p);
  const auto pi = s.index_of(p);
  if (v.index >= g.size()) throw Error(ErrorCode::UnknownLanguage, "vertex out of range");
  return detail::ising_flip_delta(g, s.row(pi), v.index);
}

/// -sum over directed edges and listed parameters of J_ll' [S_l == S_l'].
inline double potts_edge_energy(const LanguageGraph& g, const SpinConfiguration& s, std::span<const ParameterSpec> params) {
  double h = 0.0;
  for (const auto& p : params) {
    const auto pi = s.index_of(p);
    detail::require_values(s, pi);
    const auto spins = s.row(pi);
    for (const auto& e : g.edges()) {
      if (spins[e.src.index] == spins[e.dst.index]) h -= e.weight;
    }
  }
  return h;
}

inline double potts_edge_energy(const LanguageGraph& g, const SpinConfiguration& s, std::initializer_list<ParameterSpec> params) {
  return potts_edge_energy(g, s, std::span<const ParameterSpec>(params.begin(), params.size()));
}

/// H_V,l = J_l * delta(X_l, Y_l).
inline double entail_vertex_energy(const EntailmentPair& pair, const SpinConfiguration& s, LanguageId l) {
  const Spin s1 = s.get(l, pair.p1());
  const Spin s2 = s.get(l, pair.p2());
  if (!pair.p1().allows(s1) || !pair.p2().allows(s2)) throw Error(ErrorCode::InvalidSpin, "entailment pair value out of range");
  return detail::entail_violation(s1, s2) ? pair.coupling(l) : 0.0;
}

/// H = H_E + H_V for the coupled binary/ternary model.
inline double entail_total_energy(const LanguageGraph& g, const EntailmentPair& pair, const SpinConfiguration& s) {
  if (pair.couplings().size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "entailment couplings do not cover every language");
  }
  const ParameterSpec params[] = {pair.p1(), pair.p2()};
  double h = potts_edge_energy(g, s, params);
  for (std::size_t l = 0; l < g.size(); ++l) h += entail_vertex_energy(pair, s, LanguageId{l});
  return h;
}

/// Energy change of the entailment Hamiltonian when one site changes value.
/// `which` is 1 for p1 and 2 for p2; rows are the p1 and p2 spin rows.
inline double entail_site_delta(const LanguageGraph& g, const EntailmentPair& pair,
                                std::span<const Spin> row1, std::span<const Spin> row2,
                                std::size_t l, int which, Spin next) {
  const double j = pair.couplings()[l];
  if (which == 1) {
    const int before = detail::entail_violation(row1[l], row2[l]);
    const int after = detail::entail_violation(next, row2[l]);
    return detail::potts_site_delta(g, row1, l, next) + j * (after - before);
  }
  const int before = detail::entail_violation(row1[l], row2[l]);
  const int after = detail::entail_violation(row1[l], next);
  return detail::potts_site_delta(g, row2, l, next) + j * (after - before);
}

}  // namespace langspin
