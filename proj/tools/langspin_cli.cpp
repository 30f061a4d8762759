// Command-line driver: runs Ising and entailment experiments, and the exact oracle.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "langspin/langspin.hpp"

namespace fs = std::filesystem;
using namespace langspin;

namespace {

struct ExperimentConfig {
  std::string model;
  std::string parameter;
  std::string scenario;
  std::string temperature = "1";
  double entail_energy = 1.0;
  std::uint64_t steps = 1'000'000;
  std::optional<std::uint64_t> burn_in;
  std::uint64_t seed = 1;
  std::uint64_t record_every = 100;
  double weight_scale = 1.0;
  std::string unknown_policy = "set_minus_one";
  std::string edges;
  std::string matrix;
  std::string aliases;
  std::string pair_spec;
  std::string out = "out";
  std::uint64_t state_cap = kDefaultStateCap;
};

Beta parse_temperature(const std::string& text) {
  if (text == "zero") return Beta::infinite();
  const auto t = csv::parse_double(text);
  if (!t) throw Error(ErrorCode::InvalidArgument, "temperature '" + text + "' is neither a number nor 'zero'");
  return Beta::from_temperature(*t);
}

SamplerConfig sampler_config(const ExperimentConfig& cfg) {
  SamplerConfig s{parse_temperature(cfg.temperature), cfg.steps, cfg.burn_in.value_or(cfg.steps / 10), cfg.seed,
                  cfg.record_every};
  s.validate();
  return s;
}

AliasMap load_aliases(const ExperimentConfig& cfg) {
  return cfg.aliases.empty() ? AliasMap{} : parse_alias_map(read_file(cfg.aliases));
}

std::vector<EdgeRecord> load_edges(const ExperimentConfig& cfg, const AliasMap& aliases) {
  auto records = parse_edge_list(read_file(cfg.edges));
  apply_aliases(aliases, records);
  return records;
}

LanguageGraph scaled_graph(const std::vector<EdgeRecord>& records, double scale,
                           std::span<const std::string> extra = {}) {
  LanguageGraph g = build_graph(std::span<const EdgeRecord>(records), extra);
  return scale == 1.0 ? g : g.scaled(scale);
}

std::string file_stem(std::string id) {
  for (char& c : id) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    if (!keep) c = '_';
  }
  return id;
}

void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

void print_summary(const RunReport& report) {
  std::cout << "steps " << report.config.steps << ", burn-in " << report.config.burn_in << ", acceptance rate "
            << format_real(report.acceptance_rate()) << ", final energy " << format_real(report.final_energy) << "\n";
  for (const auto& track : report.tracks) {
    const auto& s = track.summary;
    std::cout << track.parameter.id << ": local magnetization mean " << format_real(s.mean) << " median "
              << format_real(s.median) << " min " << format_real(s.min) << " max " << format_real(s.max)
              << ", final avg spin " << format_real(track.avg_spin_series.empty() ? 0.0 : track.avg_spin_series.back().avg_spin) << "\n";
  }
  std::cout << "noise P(beta) = " << format_real(noise_probability(report.config.beta)) << "\n";
}

int cmd_run_ising(const ExperimentConfig& cfg) {
  require(!cfg.edges.empty(), "--edges is required for --model ising");
  require(!cfg.matrix.empty(), "--matrix is required for --model ising");
  require(!cfg.parameter.empty(), "--parameter is required for --model ising");
  const auto sampler = sampler_config(cfg);
  const auto aliases = load_aliases(cfg);
  const auto graph = scaled_graph(load_edges(cfg, aliases), cfg.weight_scale);
  auto matrix = parse_parameter_matrix(read_file(cfg.matrix));
  apply_aliases(aliases, matrix);

  const std::vector<std::string> column{cfg.parameter};
  const auto resolved = resolve_initial_config(matrix, parse_unknown_policy(cfg.unknown_policy), cfg.seed,
                                               graph.names(), column);
  if (resolved.imputed > 0) std::cerr << "imputed " << resolved.imputed << " unknown cell(s)\n";
  if (matrix.languages.size() > graph.size()) {
    std::cerr << "ignored " << matrix.languages.size() - graph.size() << " matrix language(s) absent from the edge list\n";
  }

  const ParameterSpec param = ParameterSpec::binary(cfg.parameter);
  const auto report = run_chain(graph, resolved.config, IsingModel{param}, sampler);

  fs::create_directories(cfg.out);
  const fs::path out(cfg.out);
  const auto& track = report.tracks.front();
  write_csv(track, (out / "timeseries.csv").string());
  write_magnetization_csv(report.languages, track, (out / "magnetization.csv").string());
  write_dot(graph, spin_coloring(report.initial_config, 0), (out / "initial.dot").string(), cfg.parameter);
  write_dot(graph, track.local_magnetization, (out / "final.dot").string(), cfg.parameter);
  print_summary(report);
  return 0;
}

struct EntailInstance {
  LanguageGraph graph;
  EntailmentPair pair;
  SpinConfiguration config;
};

EntailInstance load_entail_instance(const ExperimentConfig& cfg) {
  const auto aliases = load_aliases(cfg);
  if (!cfg.scenario.empty()) {
    std::optional<std::vector<EdgeRecord>> edges;
    if (!cfg.edges.empty()) edges = load_edges(cfg, aliases);
    auto sc = load_scenario(cfg.scenario, cfg.entail_energy, edges);
    LanguageGraph g = cfg.weight_scale == 1.0 ? sc.graph : sc.graph.scaled(cfg.weight_scale);
    return {std::move(g), std::move(sc.pair), std::move(sc.config)};
  }
  require(!cfg.pair_spec.empty(), "--model entail needs --scenario or --pair-spec");
  require(!cfg.edges.empty(), "--pair-spec needs --edges");
  auto spec = parse_pair_spec(read_file(cfg.pair_spec));
  for (auto& l : spec.languages) l = aliases.resolve(l);
  const auto graph = scaled_graph(load_edges(cfg, aliases), cfg.weight_scale, spec.languages);
  require(graph.size() == spec.languages.size(), "edge list names languages missing from the pair spec");
  const auto p1 = ParameterSpec::binary(spec.p1);
  const auto p2 = ParameterSpec::ternary(spec.p2);
  SpinConfiguration config({p1, p2}, graph.size());
  std::vector<double> couplings(graph.size(), 0.0);
  for (std::size_t i = 0; i < spec.languages.size(); ++i) {
    const auto id = graph.id(spec.languages[i]);
    config.set(id, 0, spec.p1_values[i]);
    config.set(id, 1, spec.p2_values[i]);
    couplings[id.index] = spec.couplings[i] * cfg.entail_energy;
  }
  EntailmentPair pair(p1, p2, std::move(couplings));
  return {graph, std::move(pair), std::move(config)};
}

int cmd_run_entail(const ExperimentConfig& cfg) {
  const auto sampler = sampler_config(cfg);
  require(std::isfinite(cfg.entail_energy) && cfg.entail_energy >= 0.0, "--entail-energy must be finite and >= 0");
  const auto inst = load_entail_instance(cfg);
  const auto report = run_chain(inst.graph, inst.config, EntailModel{inst.pair}, sampler);

  fs::create_directories(cfg.out);
  const fs::path out(cfg.out);
  for (std::size_t k = 0; k < report.tracks.size(); ++k) {
    const auto& track = report.tracks[k];
    const auto stem = file_stem(track.parameter.id);
    write_csv(track, (out / ("timeseries_" + stem + ".csv")).string());
    write_magnetization_csv(report.languages, track, (out / ("magnetization_" + stem + ".csv")).string());
    write_dot(inst.graph, spin_coloring(report.initial_config, k), (out / ("initial_" + stem + ".dot")).string(), track.parameter.id);
    write_dot(inst.graph, spin_coloring(report.final_config, k), (out / ("final_" + stem + ".dot")).string(), track.parameter.id);
  }
  write_text((out / "final_config.csv").string(), configuration_csv(report.languages, report.final_config));
  print_summary(report);
  std::cout << "entailment satisfied fraction " << format_real(*report.entailment_satisfied_fraction) << "\n";
  std::cout << configuration_csv(report.languages, report.final_config);
  return 0;
}

int cmd_oracle(const ExperimentConfig& cfg) {
  const auto sampler = sampler_config(cfg);
  require(!sampler.beta.is_infinite(), "the oracle needs a positive temperature");

  LanguageGraph graph;
  Model model = IsingModel{ParameterSpec::binary(cfg.parameter.empty() ? "spin" : cfg.parameter)};
  SpinConfiguration initial;
  if (!cfg.scenario.empty() || !cfg.pair_spec.empty()) {
    auto inst = load_entail_instance(cfg);
    graph = std::move(inst.graph);
    model = EntailModel{std::move(inst.pair)};
    initial = std::move(inst.config);
  } else {
    require(!cfg.edges.empty(), "--model oracle needs --edges, --scenario or --pair-spec");
    graph = scaled_graph(load_edges(cfg, load_aliases(cfg)), cfg.weight_scale);
    initial = SpinConfiguration({std::get<IsingModel>(model).parameter}, graph.size());
  }
  const ExactModel exact = std::visit([](const auto& m) -> ExactModel { return m; }, model);
  const StateSpace space(model_parameters(exact), graph.size(), cfg.state_cap);
  std::cout << "states " << space.size() << ", beta " << format_real(sampler.beta.value()) << "\n";

  const auto dist = enumerate(graph, exact, sampler.beta, cfg.state_cap);
  std::cout << "log Z " << format_real(dist.log_partition) << "\n";

  const std::size_t n = graph.size();
  const auto params = model_parameters(exact);
  // Pair correlations of the first parameter, sampled after burn-in.
  std::vector<double> pair_sums(n * n, 0.0);
  const auto row0 = initial.index_of(params[0]);
  const auto report = run_chain(graph, initial, model, sampler, [&](const ChainState& c, const StepOutcome&) {
    if (c.step <= sampler.burn_in) return;
    const auto row = c.config.row(row0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) pair_sums[a * n + b] += row[a] * row[b];
    }
  });
  const auto window = static_cast<double>(sampler.steps - sampler.burn_in);

  std::cout << "parameter,language,exact,sampled,abs_diff\n";
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto pi = initial.index_of(params[k]);
    for (std::size_t l = 0; l < n; ++l) {
      const double exact_m = exact_expectation(dist, [&](const SpinConfiguration& s) { return s.get(LanguageId{l}, pi); });
      const double sampled = report.tracks[k].local_magnetization[l];
      std::cout << params[k].id << "," << graph.names()[l] << "," << format_real(exact_m) << "," << format_real(sampled)
                << "," << format_real(std::abs(exact_m - sampled)) << "\n";
    }
  }
  std::cout << "pair,exact_correlation,sampled_correlation,abs_diff\n";
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double exact_c = exact_expectation(dist, [&](const SpinConfiguration& s) {
        return s.get(LanguageId{a}, row0) * s.get(LanguageId{b}, row0);
      });
      const double sampled = pair_sums[a * n + b] / window;
      std::cout << graph.names()[a] << "~" << graph.names()[b] << "," << format_real(exact_c) << ","
                << format_real(sampled) << "," << format_real(std::abs(exact_c - sampled)) << "\n";
    }
  }
  const auto balance = detailed_balance_check(graph, model, sampler.beta, 1e-12, cfg.state_cap);
  std::cout << "detailed balance max violation " << format_real(balance.max_violation) << " over "
            << balance.pairs_checked << " transitions\n";
  std::cout << "strongly connected " << (reachability_check(graph, model, sampler.beta, cfg.state_cap) ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-glass simulator for the evolution of syntactic parameters"};
  ExperimentConfig cfg;
  app.add_option("--model", cfg.model, "ising | entail | oracle")->check(CLI::IsMember({"ising", "entail", "oracle"}));
  app.add_option("--parameter", cfg.parameter, "Matrix column to simulate (ising); spin label (oracle)");
  app.add_option("--scenario", cfg.scenario, "Bundled entailment scenario: definiteness3 | deixis4");
  app.add_option("--pair-spec", cfg.pair_spec, "CSV language,<p1>,<p2>,coupling describing an entailment pair");
  app.add_option("--temperature", cfg.temperature, "Temperature T > 0, or 'zero' for the quench (beta = inf)")->capture_default_str();
  app.add_option("--entail-energy", cfg.entail_energy, "Entailment coupling J_l (scenario) or multiplier (pair spec)")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Monte Carlo steps (single-site proposals)")->capture_default_str();
  app.add_option("--burn-in", cfg.burn_in, "Discarded steps before averaging [default: steps/10]");
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--record-every", cfg.record_every, "Stride of the average-spin series")->capture_default_str();
  app.add_option("--weight-scale", cfg.weight_scale, "Multiplier applied to every edge weight")->capture_default_str();
  app.add_option("--unknown-policy", cfg.unknown_policy, "fail | set_minus_one | set_random")->capture_default_str();
  app.add_option("--edges", cfg.edges, "Edge list CSV src,dst,weight");
  app.add_option("--matrix", cfg.matrix, "Parameter matrix CSV");
  app.add_option("--aliases", cfg.aliases, "Alias map CSV canonical,alias");
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--state-cap", cfg.state_cap, "Largest state space the oracle will enumerate")->capture_default_str();

  if (argc == 1) {
    std::cout << app.help();
    return 0;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cfg.model == "ising") return cmd_run_ising(cfg);
    if (cfg.model == "entail") return cmd_run_entail(cfg);
    if (cfg.model == "oracle") return cmd_oracle(cfg);
    std::cerr << "--model is required\n" << app.help();
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::TooLarge ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
