#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "langspin/graph.hpp"
#include "langspin/oracle.hpp"
#include "langspin/rng.hpp"
#include "langspin/spin.hpp"

using namespace langspin;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected langspin::Error";
  return ErrorCode::IoError;
}

std::vector<EdgeRecord> random_records(Rng& rng, std::size_t n, double density) {
  std::vector<EdgeRecord> records;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && rng.uniform() < density) {
        records.push_back({"L" + std::to_string(a), "L" + std::to_string(b), rng.uniform() * 2.0});
      }
    }
  }
  return records;
}

}  // namespace

TEST(BuildGraph, MinimalInput) {
  const auto g = build_graph({{"A", "B", 0.5}});
  EXPECT_EQ(g.size(), 2u);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_DOUBLE_EQ(g.weight(g.id("A"), g.id("B")), 0.5);
  EXPECT_DOUBLE_EQ(g.weight(g.id("B"), g.id("A")), 0.0);
}

TEST(BuildGraph, KeepsAsymmetricWeights) {
  const auto g = build_graph({{"A", "B", 0.5}, {"B", "A", 0.3}});
  EXPECT_DOUBLE_EQ(g.weight(g.id("A"), g.id("B")), 0.5);
  EXPECT_DOUBLE_EQ(g.weight(g.id("B"), g.id("A")), 0.3);
}

TEST(BuildGraph, RejectsInvalidRecords) {
  EXPECT_EQ(code_of([] { build_graph({{"A", "A", 1.0}}); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { build_graph({{"A", "B", 1.0}, {"A", "B", 2.0}}); }), ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { build_graph({{"A", "B", -0.1}}); }), ErrorCode::InvalidWeight);
  EXPECT_EQ(code_of([] { build_graph({{"A", "B", std::nan("")}}); }), ErrorCode::InvalidWeight);
  EXPECT_EQ(code_of([] { build_graph({{"A", "B", std::numeric_limits<double>::infinity()}}); }), ErrorCode::InvalidWeight);
}

TEST(BuildGraph, IndexesByFirstAppearance) {
  const auto g = build_graph({{"C", "A", 1.0}, {"B", "C", 1.0}, {"A", "D", 1.0}});
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.id("C").index, 0u);
  EXPECT_EQ(g.id("A").index, 1u);
  EXPECT_EQ(g.id("B").index, 2u);
  EXPECT_EQ(g.id("D").index, 3u);
  EXPECT_EQ(code_of([&] { g.id("Z"); }), ErrorCode::UnknownLanguage);
}

TEST(BuildGraph, ExtraVerticesAreIsolated) {
  const std::vector<EdgeRecord> records{{"A", "B", 1.0}};
  const std::vector<std::string> extra{"B", "C"};
  const auto g = build_graph(std::span<const EdgeRecord>(records), extra);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g.id("C").index, 2u);
  EXPECT_TRUE(g.couplings(g.id("C")).empty());
}

TEST(BuildGraph, DeterministicIndexing) {
  Rng rng(11);
  const auto records = random_records(rng, 8, 0.4);
  const auto a = build_graph(records);
  const auto b = build_graph(records);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.names()[i], b.names()[i]);
}

TEST(SymmetrizedWeight, Examples) {
  const auto g = build_graph({{"A", "B", 0.5}, {"B", "A", 0.3}, {"A", "C", 0.0}, {"D", "A", 0.5}});
  EXPECT_DOUBLE_EQ(symmetrized_weight(g, g.id("A"), g.id("B")), 0.8);
  EXPECT_DOUBLE_EQ(symmetrized_weight(g, g.id("B"), g.id("C")), 0.0);
  EXPECT_DOUBLE_EQ(symmetrized_weight(g, g.id("D"), g.id("A")), 0.5);
  EXPECT_EQ(code_of([&] { symmetrized_weight(g, g.id("A"), g.id("A")); }), ErrorCode::SelfLoop);
}

TEST(SymmetrizedWeight, SymmetricAndMatchesCouplings) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = build_graph(random_records(rng, 6, 0.5));
    for (std::size_t u = 0; u < g.size(); ++u) {
      double from_couplings = 0.0;
      for (const auto& c : g.couplings(LanguageId{u})) {
        EXPECT_DOUBLE_EQ(c.weight, symmetrized_weight(g, LanguageId{u}, LanguageId{c.neighbor}));
        from_couplings += c.weight;
      }
      double direct = 0.0;
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (u == v) continue;
        EXPECT_EQ(symmetrized_weight(g, LanguageId{u}, LanguageId{v}), symmetrized_weight(g, LanguageId{v}, LanguageId{u}));
        direct += symmetrized_weight(g, LanguageId{u}, LanguageId{v});
      }
      EXPECT_NEAR(from_couplings, direct, 1e-12);
    }
  }
}

TEST(LanguageGraph, ScaledMultipliesWeights) {
  const auto g = build_graph({{"A", "B", 0.5}, {"B", "A", 0.25}}).scaled(2.0);
  EXPECT_DOUBLE_EQ(g.weight(g.id("A"), g.id("B")), 1.0);
  EXPECT_DOUBLE_EQ(symmetrized_weight(g, g.id("A"), g.id("B")), 1.5);
  EXPECT_THROW(g.scaled(0.0), Error);
}

TEST(SpinConfiguration, RejectsValuesOutsideAllowedSet) {
  SpinConfiguration s({ParameterSpec::binary("p"), ParameterSpec::ternary("q")}, 2);
  EXPECT_EQ(code_of([&] { s.set(LanguageId{0}, 0, 0); }), ErrorCode::InvalidSpin);
  EXPECT_EQ(code_of([&] { s.set(LanguageId{0}, 1, 2); }), ErrorCode::InvalidSpin);
  s.set(LanguageId{1}, 1, -1);
  EXPECT_EQ(s.get(LanguageId{1}, ParameterSpec::ternary("q")), -1);
  EXPECT_EQ(code_of([] { SpinConfiguration({ParameterSpec{"x", 4}}, 1); }), ErrorCode::ArityMismatch);
}

// |Sigma| = prod_p q_p^N, checked by brute-force enumeration of value tuples.
TEST(StateSpace, CardinalityMatchesBruteForce) {
  const std::vector<std::vector<ParameterSpec>> layouts{
      {ParameterSpec::binary("a")},
      {ParameterSpec::ternary("b")},
      {ParameterSpec::binary("a"), ParameterSpec::ternary("b")},
      {ParameterSpec::binary("a"), ParameterSpec::binary("c")},
  };
  for (const auto& params : layouts) {
    for (std::size_t n = 1; n <= 4; ++n) {
      // brute force: odometer over every site's allowed values
      std::vector<std::vector<Spin>> site_values;
      for (const auto& p : params) {
        for (std::size_t l = 0; l < n; ++l) site_values.push_back(p.values());
      }
      std::vector<std::size_t> odo(site_values.size(), 0);
      std::set<std::vector<Spin>> seen;
      while (true) {
        std::vector<Spin> tuple;
        for (std::size_t k = 0; k < odo.size(); ++k) tuple.push_back(site_values[k][odo[k]]);
        seen.insert(tuple);
        std::size_t k = 0;
        while (k < odo.size() && ++odo[k] == site_values[k].size()) odo[k++] = 0;
        if (k == odo.size()) break;
      }
      const StateSpace space(params, n);
      ASSERT_EQ(space.size(), seen.size());
      std::set<std::vector<Spin>> decoded;
      for (std::uint64_t i = 0; i < space.size(); ++i) {
        const auto s = space.decode(i);
        s.validate();
        EXPECT_EQ(space.encode(s), i);
        std::vector<Spin> tuple;
        for (std::size_t p = 0; p < params.size(); ++p) {
          for (Spin v : s.row(p)) tuple.push_back(v);
        }
        decoded.insert(tuple);
      }
      EXPECT_EQ(decoded, seen);
    }
  }
}
