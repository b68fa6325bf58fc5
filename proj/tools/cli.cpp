#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netdyn/balance.hpp"
#include "netdyn/dynamics.hpp"
#include "netdyn/eep.hpp"
#include "netdyn/error.hpp"
#include "netdyn/io.hpp"
#include "netdyn/optimize.hpp"
#include "netdyn/spectral.hpp"
#include "netdyn/stability.hpp"

namespace netdyn::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

/// Everything that determines a run; echoed into every output header.
struct RunConfig {
  std::string subcommand;
  std::string action;
  std::string graph = "karate";
  std::string partition;
  std::string times;
  std::string t_grid = "list:1";
  std::uint64_t seed = 0;
  std::string out = ".";
  double tol = kDefaultEepTolerance;
  std::string variant = "trace";
  std::string mode = "continuous";
  std::string laplacian = "combinatorial";
  bool vectors = false;
  std::string start;
  std::string input;
  std::size_t restarts = 10;
  std::string sizes;
  double p_in = 0.3;
  double p_out = 0.02;
  std::size_t matrix_size = 10;
  double t_max = 1e3;
  double norm_cap = 1e12;

  std::vector<std::pair<std::string, std::string>> entries() const {
    std::ostringstream num;
    const auto fmt = [&](double x) {
      num.str({});
      num << std::setprecision(17) << x;
      return num.str();
    };
    std::vector<std::pair<std::string, std::string>> e{{"command", subcommand}};
    if (!action.empty()) e.emplace_back("action", action);
    const auto add = [&](const char* key, const std::string& value) {
      e.emplace_back(key, value);
    };
    if (subcommand == "generate") {
      add("sizes", sizes);
      add("pin", fmt(p_in));
      add("pout", fmt(p_out));
    } else if (subcommand == "traag" || action == "traag") {
      add("n", std::to_string(matrix_size));
      add("t_max", fmt(t_max));
      add("norm_cap", fmt(norm_cap));
    } else {
      add("graph", graph);
    }
    if (!partition.empty()) add("partition", partition);
    if (!times.empty()) add("times", times);
    if (subcommand == "stability" || subcommand == "communities") {
      add("t", t_grid);
      add("variant", variant);
      add("mode", mode);
    }
    if (subcommand == "communities") add("restarts", std::to_string(restarts));
    if (subcommand == "spectrum") add("laplacian", laplacian);
    if (subcommand == "eep") add("tol", fmt(tol));
    if (!start.empty()) add("start", start);
    if (!input.empty()) add("input", input);
    add("seed", std::to_string(seed));
    add("out", out);
    return e;
  }

  std::string header_text() const {
    std::ostringstream h;
    h << "netdyn " << NETDYN_VERSION << '\n';
    for (const auto& [k, v] : entries()) h << k << ": " << v << '\n';
    return h.str();
  }

  ordered_json meta() const {
    ordered_json m;
    m["version"] = NETDYN_VERSION;
    for (const auto& [k, v] : entries()) m[k] = v;
    return m;
  }
};

class OutputDir {
 public:
  OutputDir(const RunConfig& config) : config_(config), dir_(config.out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InputError("cli", "cannot create output directory '" + config.out + "'");
  }

  // Opens `name` and writes the comment header.
  std::ofstream csv(const std::string& name) const {
    std::ofstream out(dir_ / name);
    if (!out) throw InputError("cli", "cannot write '" + (dir_ / name).string() + "'");
    write_comment_header(out, config_.header_text());
    return out;
  }

  void json(const std::string& name, ordered_json body) const {
    ordered_json doc;
    doc["meta"] = config_.meta();
    for (auto& [k, v] : body.items()) doc[k] = v;
    std::ofstream out(dir_ / name);
    if (!out) throw InputError("cli", "cannot write '" + (dir_ / name).string() + "'");
    out << doc.dump(2) << '\n';
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  const RunConfig& config_;
  fs::path dir_;
};

std::size_t resolve_node(const Graph& g, const RunConfig& config, const std::string& name) {
  if (auto idx = g.index_of(name)) return *idx;
  if (config.graph == "karate") {
    if (name == "instructor") return kKarateInstructor;
    if (name == "president") return kKaratePresident;
  }
  throw InputError("cli", "unknown node '" + name + "'");
}

Vector time_grid(const std::string& spec) {
  if (spec.starts_with("log:") || spec.starts_with("list:")) return parse_time_grid(spec);
  return parse_time_grid("list:" + spec);
}

Vector random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector x(n);
  for (double& v : x) v = uniform01(rng());
  return x;
}

Vector parse_node_values(const Graph& g, const RunConfig& config, const std::string& spec) {
  Vector u(g.size(), 0.0);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("cli", "expected node=value in '" + item + "'");
    const std::size_t node = resolve_node(g, config, item.substr(0, eq));
    try {
      u[node] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("cli", "bad value in '" + item + "'");
    }
  }
  return u;
}

Partition load_partition(const Graph& g, const RunConfig& config) {
  if (config.partition.empty()) throw InputError("cli", "--partition is required");
  if (config.partition == "factions" && config.graph == "karate") return karate_factions();
  return read_partition_csv(fs::path(config.partition), g);
}

// -- subcommands -------------------------------------------------------------

void cmd_spectrum(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  Matrix op;
  if (config.laplacian == "combinatorial")
    op = combinatorial_laplacian(g);
  else if (config.laplacian == "normalized" || config.laplacian == "random-walk")
    op = normalized_laplacian(g);  // L_RW is isospectral with L_N
  else if (config.laplacian == "signed")
    op = signed_laplacian(g);
  else
    throw InputError("cli", "unknown laplacian '" + config.laplacian + "'");
  const Spectrum s = decompose(op);
  const OutputDir out(config);
  auto csv = out.csv("spectrum.csv");
  write_spectrum_csv(csv, s);
  if (config.vectors) {
    auto vec = out.csv("eigenvectors.csv");
    write_eigenvectors_csv(vec, s, g);
  }
}

void cmd_consensus(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  const Spectrum s = decompose(combinatorial_laplacian(g));
  const Vector times = config.times.empty() ? default_time_grid(s) : time_grid(config.times);
  const Vector x0 = random_state(g.size(), config.seed);
  const Vector u = config.input.empty() ? Vector{} : parse_node_values(g, config, config.input);
  const Trajectory traj = simulate_consensus(g, x0, times, u);
  auto csv = OutputDir(config).csv("trajectory.csv");
  write_trajectory_csv(csv, traj, g);
}

void cmd_walk(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  if (config.start.empty()) throw InputError("cli", "--start is required");
  Vector p0(g.size(), 0.0);
  p0[resolve_node(g, config, config.start)] = 1.0;
  const Vector times = config.times.empty() ? default_time_grid(decompose(normalized_laplacian(g)))
                                            : time_grid(config.times);
  const Trajectory traj = simulate_random_walk(g, p0, times);
  auto csv = OutputDir(config).csv("trajectory.csv");
  write_trajectory_csv(csv, traj, g);
}

void cmd_signed(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  const Vector times = config.times.empty() ? default_time_grid(decompose(signed_laplacian(g)))
                                            : time_grid(config.times);
  const Vector x0 = random_state(g.size(), config.seed);
  const Trajectory traj = simulate_signed_consensus(g, x0, times);
  auto csv = OutputDir(config).csv("trajectory.csv");
  write_trajectory_csv(csv, traj, g);
}

ordered_json report_json(const Graph& g, const EepReport& r) {
  ordered_json j;
  j["is_eep"] = r.is_eep;
  j["max_violation"] = r.max_violation;
  if (r.witness)
    j["witness"] = {{"node", g.node(r.witness->first)}, {"cell", r.witness->second}};
  else
    j["witness"] = nullptr;
  return j;
}

void cmd_eep(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  const OutputDir out(config);
  if (config.action == "check") {
    const Partition p = load_partition(g, config);
    out.json("eep_report.json", report_json(g, check_eep(g, p, config.tol)));
    return;
  }
  // reduce: given partition, or the coarsest EEP when none is supplied
  const Partition p = config.partition.empty() ? coarsest_eep(g, std::nullopt, config.tol)
                                               : load_partition(g, config);
  const QuotientGraph q = quotient_laplacian(g, p, config.tol);
  out.json("eep_report.json", report_json(g, check_eep(g, p, config.tol)));
  {
    auto csv = out.csv("partition.csv");
    write_partition_csv(csv, g, p);
  }
  // directed quotient edges: i -> j carries −L^π_ij
  auto edges = out.csv("quotient.edges");
  edges << std::setprecision(17);
  for (std::size_t i = 0; i < q.laplacian.rows(); ++i)
    for (std::size_t j = 0; j < q.laplacian.cols(); ++j)
      if (i != j && q.laplacian(i, j) != 0.0) edges << i << ' ' << j << ' ' << -q.laplacian(i, j) << '\n';
}

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) x(i, j) = x(j, i) = normal(rng);
  return x;
}

void cmd_traag(const RunConfig& config) {
  const Matrix x0 = random_symmetric(config.matrix_size, config.seed);
  TraagOptions options;
  options.t_max = config.t_max;
  options.norm_cap = config.norm_cap;
  const TraagResult r = simulate_traag(x0, options);
  const OutputDir out(config);
  {
    auto csv = out.csv("traag_norm.csv");
    csv << "t,norm\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.times.size(); ++i) csv << r.times[i] << ',' << r.norm_history[i] << '\n';
  }
  ordered_json body;
  body["stopped_reason"] = to_string(r.stopped_reason);
  body["t_stop"] = r.times.back();
  const Graph factions = sign_graph(r.sign_pattern);
  const BalanceResult b = check_balance(factions);
  body["sign_pattern_balanced"] = b.balanced;
  body["factions"] = b.sigma;
  body["rank_one_residual"] =
      frobenius_norm(r.final_normalized - best_rank_one(r.final_normalized));
  out.json("traag.json", body);
}

void cmd_balance(const RunConfig& config) {
  if (config.action == "traag") return cmd_traag(config);
  const Graph g = load_graph(config.graph);
  const BalanceResult b = check_balance(g);
  const OutputDir out(config);
  if (config.action == "check") {
    ordered_json body;
    body["balanced"] = b.balanced;
    ordered_json sigma = ordered_json::object();
    for (std::size_t i = 0; i < g.size(); ++i) sigma[g.node(i)] = b.sigma[i];
    body["sigma"] = sigma;
    ordered_json frustrated = ordered_json::array();
    for (const Edge& e : b.frustrated_edges)
      frustrated.push_back({{"source", g.node(e.source)}, {"target", g.node(e.target)}, {"weight", e.weight}});
    body["frustrated_edges"] = frustrated;
    out.json("balance.json", body);
    return;
  }
  const Graph switched = switch_signs(g, b.sigma);
  auto edges = out.csv("switched.edges");
  write_edge_list(edges, switched);
}

void cmd_stability(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  const Partition p = load_partition(g, config);
  const TransitionFamily f(g, parse_time_mode(config.mode));
  const Variant variant = parse_variant(config.variant);
  auto csv = OutputDir(config).csv("stability.csv");
  csv << "t,r,k\n" << std::setprecision(17);
  for (double t : time_grid(config.t_grid)) {
    const StabilityScore s = stability_score(f, p, t, variant);
    csv << t << ',' << s.r << ',' << p.cell_count() << '\n';
  }
}

void cmd_communities(const RunConfig& config) {
  const Graph g = load_graph(config.graph);
  const TransitionFamily f(g, parse_time_mode(config.mode));
  OptimizeOptions options;
  options.variant = parse_variant(config.variant);
  options.seed = config.seed;
  options.restarts = config.restarts;
  const SweepResult sweep = stability_sweep(f, time_grid(config.t_grid), options);
  const OutputDir out(config);
  {
    auto csv = out.csv("sweep.csv");
    write_sweep_csv(csv, sweep);
  }
  {
    auto csv = out.csv("plateaus.csv");
    csv << "t_first,t_last,k,length\n" << std::setprecision(17);
    for (const Plateau& p : sweep.plateaus)
      csv << sweep.entries[p.first].t << ',' << sweep.entries[p.last].t << ',' << p.k << ','
          << p.last - p.first + 1 << '\n';
  }
  for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
    std::ostringstream name;
    name << "partition_" << std::setw(3) << std::setfill('0') << i << ".csv";
    auto csv = out.csv(name.str());
    csv << std::setprecision(17);
    csv << "# t: " << sweep.entries[i].t << '\n';
    write_partition_csv(csv, g, sweep.entries[i].partition);
  }
}

void cmd_generate(const RunConfig& config) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(config.sizes);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long long v = std::stoll(item);
      if (v <= 0) throw std::invalid_argument("size");
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("cli", "bad block size '" + item + "'");
    }
  }
  if (sizes.empty()) throw InputError("cli", "--sizes is required");
  const Graph g = generate_planted_partition(sizes, config.p_in, config.p_out, config.seed);
  const OutputDir out(config);
  {
    auto edges = out.csv("planted.edges");
    write_edge_list(edges, g);
  }
  auto blocks = out.csv("planted_blocks.csv");
  write_partition_csv(blocks, g, planted_blocks(sizes));
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"netdyn: dynamics-based analysis and coarse-graining of networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETDYN_VERSION);
  RunConfig config;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", config.graph, "Edge list, JSON graph, or 'karate'");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--out", config.out, "Output directory");
  };
  const auto action = [&](CLI::App* parent, const char* name, const char* help) {
    auto* sub = parent->add_subcommand(name, help);
    sub->callback([&config, name]() { config.action = name; });
    return sub;
  };

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of a graph Laplacian");
  common(spectrum);
  spectrum->add_option("--laplacian", config.laplacian,
                       "combinatorial|normalized|random-walk|signed");
  spectrum->add_flag("--vectors", config.vectors, "Also write eigenvectors.csv");

  auto* consensus = app.add_subcommand("consensus", "Consensus dynamics from a random start");
  common(consensus);
  consensus->add_option("--times", config.times, "log:a:b:n or list:t1,t2,...");
  consensus->add_option("--input", config.input, "Constant input node=value,...");

  auto* walk = app.add_subcommand("walk", "Continuous-time random walk from one node");
  common(walk);
  walk->add_option("--times", config.times, "log:a:b:n or list:t1,t2,...");
  walk->add_option("--start", config.start, "Start node")->required();

  auto* signed_cmd = app.add_subcommand("signed", "Signed consensus from a random start");
  common(signed_cmd);
  signed_cmd->add_option("--times", config.times, "log:a:b:n or list:t1,t2,...");

  auto* eep = app.add_subcommand("eep", "External equitable partitions");
  eep->require_subcommand(1);
  for (auto* sub : {action(eep, "check", "Check a partition"),
                    action(eep, "reduce", "Quotient graph of a partition or of the coarsest EEP")}) {
    common(sub);
    sub->add_option("--partition", config.partition, "Partition CSV (node,cell)");
    sub->add_option("--tol", config.tol, "Equitability tolerance");
  }

  const auto traag_options = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Random seed for X0");
    sub->add_option("--out", config.out, "Output directory");
    sub->add_option("--n", config.matrix_size, "Size of the random symmetric X0");
    sub->add_option("--t-max", config.t_max, "Integration horizon");
    sub->add_option("--norm-cap", config.norm_cap, "Blow-up threshold on ||X||_F");
  };

  auto* balance = app.add_subcommand("balance", "Structural balance of signed graphs");
  balance->require_subcommand(1);
  for (auto* sub : {action(balance, "check", "Tree 2-coloring balance test"),
                    action(balance, "switch", "Gauge-switch the graph by its polarization")})
    common(sub);
  traag_options(action(balance, "traag", "Traag structural dynamics"));

  auto* traag = app.add_subcommand("traag", "Traag structural dynamics dX/dt = X X^T");
  traag_options(traag);

  auto* stability = app.add_subcommand("stability", "Markov Stability scores");
  stability->require_subcommand(1);
  auto* score = action(stability, "score", "Score a partition over Markov times");
  common(score);
  score->add_option("--partition", config.partition, "Partition CSV (node,cell)")->required();

  auto* communities = app.add_subcommand("communities", "Optimize Markov Stability over time");
  common(communities);
  communities->add_option("--restarts", config.restarts, "Restarts per Markov time");

  for (auto* sub : {score, communities}) {
    sub->add_option("--t,--times", config.t_grid, "Markov time(s): t, t1,t2, log:a:b:n, list:...");
    sub->add_option("--variant", config.variant, "trace|corr|min");
    sub->add_option("--mode", config.mode, "continuous|discrete");
  }

  auto* generate = app.add_subcommand("generate", "Random graph generators");
  generate->require_subcommand(1);
  auto* planted = action(generate, "planted", "Planted partition graph");
  planted->add_option("--sizes", config.sizes, "Block sizes, comma-separated")->required();
  planted->add_option("--pin", config.p_in, "Within-block edge probability");
  planted->add_option("--pout", config.p_out, "Between-block edge probability");
  planted->add_option("--seed", config.seed, "Random seed");
  planted->add_option("--out", config.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (auto* sub : app.get_subcommands()) config.subcommand = sub->get_name();

  try {
    if (config.subcommand == "spectrum") cmd_spectrum(config);
    else if (config.subcommand == "consensus") cmd_consensus(config);
    else if (config.subcommand == "walk") cmd_walk(config);
    else if (config.subcommand == "signed") cmd_signed(config);
    else if (config.subcommand == "eep") cmd_eep(config);
    else if (config.subcommand == "balance") cmd_balance(config);
    else if (config.subcommand == "traag") cmd_traag(config);
    else if (config.subcommand == "stability") cmd_stability(config);
    else if (config.subcommand == "communities") cmd_communities(config);
    else if (config.subcommand == "generate") cmd_generate(config);
  } catch (const NumericalError& e) {
    std::cerr << "netdyn: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InputError& e) {
    std::cerr << "netdyn: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "netdyn: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace netdyn::cli
