#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/hamiltonian.hpp"
#include "langspin/rng.hpp"
#include "langspin/spin.hpp"

namespace langspin {

namespace csv {

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<std::string> fields;
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

/// Splits comma-separated text into non-blank lines. Accepts LF or CRLF endings.
inline std::vector<Line> read_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    if (!trim(raw).empty()) {
      Line line{number, {}};
      std::size_t start = 0;
      while (true) {
        const auto comma = raw.find(',', start);
        line.fields.emplace_back(trim(raw.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      lines.push_back(std::move(line));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

inline std::optional<double> parse_double(std::string_view token) {
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return value;
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline Error format_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::FormatError, "line " + std::to_string(line) + ": " + what);
}

inline Error format_error(std::size_t line, std::size_t column, const std::string& what) {
  return Error(ErrorCode::FormatError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

}  // namespace csv

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// SSWL-style matrix: rows are languages, columns parameters, cells +1 / -1 / unknown.
struct ParameterMatrix {
  std::vector<std::string> languages;
  std::vector<std::string> parameters;
  std::vector<std::vector<std::optional<Spin>>> cells;  // [language][parameter]

  std::size_t column(const std::string& parameter) const {
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      if (parameters[i] == parameter) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "matrix has no parameter '" + parameter + "'");
  }

  friend bool operator==(const ParameterMatrix&, const ParameterMatrix&) = default;
};

inline ParameterMatrix parse_parameter_matrix(std::string_view text) {
  const auto lines = csv::read_lines(text);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "parameter matrix is empty");
  const auto& header = lines.front();
  if (header.fields.front() != "language") throw csv::format_error(header.number, 1, "header must start with 'language'");
  ParameterMatrix m;
  m.parameters.assign(header.fields.begin() + 1, header.fields.end());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.fields.size() != header.fields.size()) {
      throw csv::format_error(line.number, "expected " + std::to_string(header.fields.size()) + " fields, got " + std::to_string(line.fields.size()));
    }
    m.languages.push_back(line.fields[0]);
    auto& row = m.cells.emplace_back();
    for (std::size_t c = 1; c < line.fields.size(); ++c) {
      const auto& token = line.fields[c];
      if (token == "1") row.emplace_back(Spin{1});
      else if (token == "-1") row.emplace_back(Spin{-1});
      else if (token == "?") row.emplace_back(std::nullopt);
      else throw csv::format_error(line.number, c + 1, "unknown token '" + token + "'");
    }
  }
  return m;
}

inline std::string serialize_parameter_matrix(const ParameterMatrix& m) {
  std::string out = "language";
  for (const auto& p : m.parameters) out += "," + p;
  out += "\n";
  for (std::size_t i = 0; i < m.languages.size(); ++i) {
    out += m.languages[i];
    for (const auto& cell : m.cells[i]) out += cell ? (*cell > 0 ? ",1" : ",-1") : ",?";
    out += "\n";
  }
  return out;
}

/// Lines "src,dst,weight"; an optional "src,dst,weight" header is skipped.
inline std::vector<EdgeRecord> parse_edge_list(std::string_view text) {
  std::vector<EdgeRecord> records;
  for (const auto& line : csv::read_lines(text)) {
    if (line.fields.size() != 3) throw csv::format_error(line.number, "expected src,dst,weight");
    if (records.empty() && line.fields[0] == "src" && line.fields[1] == "dst" && line.fields[2] == "weight") continue;
    const auto weight = csv::parse_double(line.fields[2]);
    if (!weight) throw csv::format_error(line.number, "weight '" + line.fields[2] + "' is not a number");
    records.push_back({line.fields[0], line.fields[1], *weight});
  }
  return records;
}

inline std::string serialize_edge_list(std::span<const EdgeRecord> records) {
  std::string out;
  for (const auto& r : records) out += r.src + "," + r.dst + "," + csv::format_double(r.weight) + "\n";
  return out;
}

/// Canonical-name reconciliation between data sources.
class AliasMap {
 public:
  /// Rejects an alias claimed by two canonical names, and chains (an alias that is
  /// itself canonical for another name), so that resolve() is idempotent.
  void add(const std::string& canonical, const std::string& alias) {
    if (canonical == alias) return;
    if (auto it = to_canonical_.find(alias); it != to_canonical_.end() && it->second != canonical) {
      throw Error(ErrorCode::FormatError, "alias '" + alias + "' maps to both '" + it->second + "' and '" + canonical + "'");
    }
    if (aliases_.contains(alias)) throw Error(ErrorCode::FormatError, "alias '" + alias + "' is also a canonical name");
    if (to_canonical_.contains(canonical)) throw Error(ErrorCode::FormatError, "canonical '" + canonical + "' is also an alias");
    to_canonical_[alias] = canonical;
    aliases_[canonical].insert(alias);
  }

  const std::string& resolve(const std::string& name) const {
    auto it = to_canonical_.find(name);
    return it == to_canonical_.end() ? name : it->second;
  }

  const std::map<std::string, std::set<std::string>>& mapping() const noexcept { return aliases_; }
  bool empty() const noexcept { return to_canonical_.empty(); }

 private:
  std::map<std::string, std::string> to_canonical_;
  std::map<std::string, std::set<std::string>> aliases_;
};

inline AliasMap parse_alias_map(std::string_view text) {
  AliasMap map;
  bool first = true;
  for (const auto& line : csv::read_lines(text)) {
    if (line.fields.size() != 2) throw csv::format_error(line.number, "expected canonical,alias");
    if (first && line.fields[0] == "canonical" && line.fields[1] == "alias") {
      first = false;
      continue;
    }
    first = false;
    try {
      map.add(line.fields[0], line.fields[1]);
    } catch (const Error& e) {
      throw csv::format_error(line.number, e.what());
    }
  }
  return map;
}

inline void apply_aliases(const AliasMap& aliases, std::vector<EdgeRecord>& records) {
  for (auto& r : records) {
    r.src = aliases.resolve(r.src);
    r.dst = aliases.resolve(r.dst);
  }
}

inline void apply_aliases(const AliasMap& aliases, ParameterMatrix& m) {
  std::set<std::string> seen;
  for (auto& l : m.languages) {
    l = aliases.resolve(l);
    if (!seen.insert(l).second) throw Error(ErrorCode::FormatError, "language '" + l + "' appears twice after alias resolution");
  }
}

enum class UnknownPolicy { Fail, SetMinusOne, SetRandom };

inline UnknownPolicy parse_unknown_policy(std::string_view name) {
  if (name == "fail") return UnknownPolicy::Fail;
  if (name == "set_minus_one") return UnknownPolicy::SetMinusOne;
  if (name == "set_random") return UnknownPolicy::SetRandom;
  throw Error(ErrorCode::InvalidArgument, "unknown policy '" + std::string(name) + "'");
}

struct ResolvedConfig {
  SpinConfiguration config;
  std::size_t imputed = 0;
};

/// Turns matrix columns into binary spins for the languages in `order` (matrix
/// order when empty). Unknown cells follow `policy`; set_random draws from `seed`.
inline ResolvedConfig resolve_initial_config(const ParameterMatrix& m, UnknownPolicy policy, std::uint64_t seed = 0,
                                             std::span<const std::string> order = {},
                                             std::span<const std::string> columns = {}) {
  std::vector<std::string> langs(order.begin(), order.end());
  if (langs.empty()) langs = m.languages;
  std::vector<std::string> cols(columns.begin(), columns.end());
  if (cols.empty()) cols = m.parameters;

  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < m.languages.size(); ++i) row_of[m.languages[i]] = i;

  std::vector<ParameterSpec> params;
  std::vector<std::size_t> col_index;
  for (const auto& c : cols) {
    params.push_back(ParameterSpec::binary(c));
    col_index.push_back(m.column(c));
  }
  ResolvedConfig out{SpinConfiguration(params, langs.size()), 0};
  Rng rng(seed, 0x5eed);
  for (std::size_t l = 0; l < langs.size(); ++l) {
    auto it = row_of.find(langs[l]);
    if (it == row_of.end()) throw Error(ErrorCode::UnknownLanguage, "matrix has no row for '" + langs[l] + "'");
    for (std::size_t p = 0; p < params.size(); ++p) {
      const auto& cell = m.cells[it->second][col_index[p]];
      if (cell) {
        out.config.set(LanguageId{l}, p, *cell);
        continue;
      }
      switch (policy) {
        case UnknownPolicy::Fail:
          throw Error(ErrorCode::UnknownValue, "'" + langs[l] + "' has no value for '" + params[p].id + "'");
        case UnknownPolicy::SetMinusOne:
          out.config.set(LanguageId{l}, p, -1);
          break;
        case UnknownPolicy::SetRandom:
          out.config.set(LanguageId{l}, p, rng.coin() ? 1 : -1);
          break;
      }
      ++out.imputed;
    }
  }
  return out;
}

/// Explicit entailment pair: header "language,<p1>,<p2>,coupling", p1 in {1,-1},
/// p2 in {1,0,-1}, coupling = J_l.
struct PairSpec {
  std::string p1;
  std::string p2;
  std::vector<std::string> languages;
  std::vector<Spin> p1_values;
  std::vector<Spin> p2_values;
  std::vector<double> couplings;
};

inline PairSpec parse_pair_spec(std::string_view text) {
  const auto lines = csv::read_lines(text);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "pair spec is empty");
  const auto& header = lines.front();
  if (header.fields.size() != 4 || header.fields[0] != "language" || header.fields[3] != "coupling") {
    throw csv::format_error(header.number, "header must be language,<p1>,<p2>,coupling");
  }
  PairSpec spec{header.fields[1], header.fields[2], {}, {}, {}, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.fields.size() != 4) throw csv::format_error(line.number, "expected 4 fields");
    auto spin = [&](std::size_t c, bool ternary) -> Spin {
      const auto& t = line.fields[c];
      if (t == "1") return 1;
      if (t == "-1") return -1;
      if (ternary && t == "0") return 0;
      throw csv::format_error(line.number, c + 1, "invalid value '" + t + "'");
    };
    spec.languages.push_back(line.fields[0]);
    spec.p1_values.push_back(spin(1, false));
    spec.p2_values.push_back(spin(2, true));
    const auto j = csv::parse_double(line.fields[3]);
    if (!j) throw csv::format_error(line.number, 4, "coupling '" + line.fields[3] + "' is not a number");
    spec.couplings.push_back(*j);
  }
  return spec;
}

/// A self-contained entailment experiment: graph, coupled pair and initial state.
struct Scenario {
  std::string name;
  LanguageGraph graph;
  EntailmentPair pair;
  SpinConfiguration config;
};

namespace detail {

struct ScenarioTable {
  std::vector<std::string> languages;
  std::string p1;
  std::string p2;
  std::vector<Spin> p1_values;
  std::vector<Spin> p2_values;
  std::vector<std::pair<std::string, std::string>> negligible;
};

inline ScenarioTable scenario_table(std::string_view name) {
  if (name == "definiteness3") {
    return {{"English", "Russian", "Bulgarian"}, "partial_definiteness", "definiteness_checking",
            {1, -1, 1}, {-1, 0, 1}, {}};
  }
  if (name == "deixis4") {
    return {{"English", "Welsh", "Russian", "Bulgarian"}, "strong_deixis", "strong_anaphoricity",
            {1, -1, 1, 1}, {1, 0, 1, -1}, {{"Welsh", "Russian"}, {"Welsh", "Bulgarian"}}};
  }
  throw Error(ErrorCode::UnknownScenario, "no scenario named '" + std::string(name) + "'");
}

}  // namespace detail

inline std::vector<std::string> scenario_names() { return {"definiteness3", "deixis4"}; }

/// Unit weight in both directions between every language pair; negligible pairs get 0.
inline std::vector<EdgeRecord> scenario_edges(std::string_view name) {
  const auto table = detail::scenario_table(name);
  auto negligible = [&](const std::string& a, const std::string& b) {
    for (const auto& [x, y] : table.negligible) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  };
  std::vector<EdgeRecord> edges;
  for (const auto& a : table.languages) {
    for (const auto& b : table.languages) {
      if (a != b) edges.push_back({a, b, negligible(a, b) ? 0.0 : 1.0});
    }
  }
  return edges;
}

/// Loads a bundled scenario with J_l = entail_energy for every language. When
/// `edges` is given it replaces the bundled unit weights.
inline Scenario load_scenario(std::string_view name, double entail_energy = 1.0,
                              const std::optional<std::vector<EdgeRecord>>& edges = std::nullopt) {
  const auto table = detail::scenario_table(name);
  const auto records = edges ? *edges : scenario_edges(name);
  LanguageGraph graph = build_graph(std::span<const EdgeRecord>(records), table.languages);
  if (graph.size() != table.languages.size()) {
    throw Error(ErrorCode::UnknownLanguage, "edge list names languages outside scenario '" + std::string(name) + "'");
  }
  const ParameterSpec p1 = ParameterSpec::binary(table.p1);
  const ParameterSpec p2 = ParameterSpec::ternary(table.p2);
  SpinConfiguration config({p1, p2}, graph.size());
  for (std::size_t i = 0; i < table.languages.size(); ++i) {
    const auto id = graph.id(table.languages[i]);
    config.set(id, 0, table.p1_values[i]);
    config.set(id, 1, table.p2_values[i]);
  }
  EntailmentPair pair(p1, p2, std::vector<double>(graph.size(), entail_energy));
  return Scenario{std::string(name), std::move(graph), std::move(pair), std::move(config)};
}

}  // namespace langspin
