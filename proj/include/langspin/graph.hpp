#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "langspin/error.hpp"

namespace langspin {

/// Dense handle for a language vertex. Indices are a bijection onto 0..N-1.
struct LanguageId {
  std::size_t index = 0;
  friend bool operator==(LanguageId, LanguageId) = default;
  friend auto operator<=>(LanguageId, LanguageId) = default;
};

/// One directed interaction record as read from an edge list, before validation.
struct EdgeRecord {
  std::string src;
  std::string dst;
  double weight = 0.0;
  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct DirectedEdge {
  LanguageId src;
  LanguageId dst;
  double weight = 0.0;
};

/// Neighbor entry in the undirected view: the coupling J_uv + J_vu felt by the pair.
struct Coupling {
  std::size_t neighbor = 0;
  double weight = 0.0;
};

/// Directed, weighted, ferromagnetic interaction graph. Immutable once built.
class LanguageGraph {
 public:
  LanguageGraph() = default;

  std::size_t size() const noexcept { return names_.size(); }
  std::span<const std::string> names() const noexcept { return names_; }
  const std::string& name(LanguageId id) const { return names_.at(id.index); }
  std::span<const DirectedEdge> edges() const noexcept { return edges_; }

  LanguageId id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorCode::UnknownLanguage, "no language named '" + name + "'");
    return LanguageId{it->second};
  }
  bool contains(const std::string& name) const { return index_.contains(name); }

  /// Undirected neighbors of `v`, ordered by neighbor index.
  std::span<const Coupling> couplings(LanguageId v) const {
    return std::span<const Coupling>(couplings_).subspan(offsets_.at(v.index),
                                                         offsets_.at(v.index + 1) - offsets_[v.index]);
  }

  /// Stored J_uv, or 0 when the directed edge is absent.
  double weight(LanguageId u, LanguageId v) const {
    auto it = directed_.find({u.index, v.index});
    return it == directed_.end() ? 0.0 : edges_[it->second].weight;
  }

  double mean_weight() const {
    if (edges_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : edges_) sum += e.weight;
    return sum / static_cast<double>(edges_.size());
  }

  /// Copy with every weight multiplied by `factor` (factor must be finite and > 0).
  LanguageGraph scaled(double factor) const;

  friend LanguageGraph build_graph(std::span<const EdgeRecord> records,
                                   std::span<const std::string> extra_vertices);

 private:
  void finalize();

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<DirectedEdge> edges_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> directed_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Coupling> couplings_;
};

/// Builds a graph from edge records. Vertices are indexed in first-appearance order;
/// `extra_vertices` (isolated languages) are appended after all edge endpoints.
inline LanguageGraph build_graph(std::span<const EdgeRecord> records,
                                 std::span<const std::string> extra_vertices = {}) {
  LanguageGraph g;
  auto intern = [&g](const std::string& name) {
    auto [it, inserted] = g.index_.try_emplace(name, g.names_.size());
    if (inserted) g.names_.push_back(name);
    return it->second;
  };
  for (const auto& r : records) {
    if (!std::isfinite(r.weight) || r.weight < 0.0) {
      throw Error(ErrorCode::InvalidWeight,
                  r.src + "->" + r.dst + " has weight " + std::to_string(r.weight));
    }
    if (r.src == r.dst) throw Error(ErrorCode::SelfLoop, r.src + "->" + r.dst);
    std::size_t s = intern(r.src);
    std::size_t d = intern(r.dst);
    if (!g.directed_.try_emplace({s, d}, g.edges_.size()).second) {
      throw Error(ErrorCode::DuplicateEdge, r.src + "->" + r.dst);
    }
    g.edges_.push_back({LanguageId{s}, LanguageId{d}, r.weight});
  }
  for (const auto& name : extra_vertices) intern(name);
  g.finalize();
  return g;
}

inline LanguageGraph build_graph(const std::vector<EdgeRecord>& records) {
  return build_graph(std::span<const EdgeRecord>(records), {});
}

inline void LanguageGraph::finalize() {
  const std::size_t n = names_.size();
  std::vector<std::map<std::size_t, double>> acc(n);
  for (const auto& e : edges_) {
    acc[e.src.index][e.dst.index] += e.weight;
    acc[e.dst.index][e.src.index] += e.weight;
  }
  offsets_.assign(n + 1, 0);
  couplings_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    for (auto [u, w] : acc[v]) couplings_.push_back({u, w});
    offsets_[v + 1] = couplings_.size();
  }
}

inline LanguageGraph LanguageGraph::scaled(double factor) const {
  if (!std::isfinite(factor) || factor <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "weight scale must be finite and positive");
  }
  LanguageGraph g = *this;
  for (auto& e : g.edges_) e.weight *= factor;
  g.finalize();
  return g;
}

/// J_uv + J_vu: the undirected coupling a spin pair feels under the doubled-edge convention.
inline double symmetrized_weight(const LanguageGraph& g, LanguageId u, LanguageId v) {
  if (u == v) throw Error(ErrorCode::SelfLoop, "symmetrized weight of a vertex with itself");
  return g.weight(u, v) + g.weight(v, u);
}

}  // namespace langspin
