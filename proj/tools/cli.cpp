#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mdlocal/errors.hpp"
#include "mdlocal/generators.hpp"
#include "mdlocal/hardcore.hpp"

namespace mdlocal::cli {

Json to_json(const EstimateResult& r, bool verbose) {
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["estimate"] = r.estimate;
  j["additive_bound"] = r.additive_bound;
  j["confidence"] = r.confidence;
  j["certified"] = r.certified;
  j["queries"] = r.queries;
  j["samples"] = r.samples;
  j["lambda"] = r.lambda;
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  j["budget_exhausted_samples"] = r.budget_exhausted_samples;
  j["mean_sample_error"] = r.mean_sample_error;
  if (verbose) j["sample_errors"] = r.sample_errors;
  j["warnings"] = r.warnings;
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

Json to_json(const MarginalEstimate& m) {
  Json j;
  j["value"] = m.value;
  j["lower"] = m.lower;
  j["upper"] = m.upper;
  j["depth"] = m.depth;
  j["queries"] = m.queries;
  j["certified"] = m.certified;
  j["log_gap"] = m.log_gap;
  j["precision_limited"] = m.precision_limited;
  return j;
}

Json to_json(const ExactStats& s, const Graph& graph) {
  Json j;
  Json counts = Json::array();
  for (const auto& c : s.matching_counts) counts.push_back(c.str());
  j["matching_counts"] = counts;
  j["Z"] = s.z;
  j["log_Z"] = s.log_z;
  j["avg_size"] = s.avg_size;
  j["entropy"] = s.entropy;
  j["max_matching"] = s.max_matching;
  Json ids = Json::array();
  for (VertexId v = 0; v < graph.num_vertices(); ++v) ids.push_back(graph.original_id(v));
  j["vertex_ids"] = ids;
  j["marginals"] = s.marginals;
  return j;
}

Json graph_summary(const Graph& graph) {
  Json j;
  j["n"] = graph.num_vertices();
  j["m"] = graph.num_edges();
  j["max_degree"] = graph.max_degree();
  j["self_loop_count"] = graph.self_loop_count();
  j["weighted"] = graph.has_activities();
  return j;
}

namespace {

struct Common {
  std::string graph_path;
  std::string format = "plain";
  bool dedupe_symmetric = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool verbose = false;
  double lambda = 1.0;
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<std::uint64_t> budget;
};

unsigned default_threads() {
  if (const char* env = std::getenv("MDLOCAL_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void add_graph_flags(CLI::App* app, Common& c) {
  app->add_option("--graph", c.graph_path, "Edge-list file")->required();
  app->add_option("--format", c.format, "Edge-list format")
      ->check(CLI::IsMember({"plain", "weighted"}));
  app->add_flag("--dedupe-symmetric", c.dedupe_symmetric,
                "Merge (u,v)/(v,u) line pairs into one edge");
  app->add_flag("--verbose", c.verbose, "Include per-sample diagnostics");
}

void add_estimator_flags(CLI::App* app, Common& c, bool with_lambda = true) {
  if (with_lambda) app->add_option("--lambda", c.lambda, "Activity (scales per-edge weights)");
  app->add_option("--epsilon", c.epsilon, "Additive error per vertex");
  app->add_option("--delta", c.delta, "Failure probability");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--budget", c.budget, "Per-sample oracle query budget")
      ->expected(0, 1)
      ->default_str("1000000");
}

Graph load_graph(const Common& c) {
  std::ifstream in(c.graph_path);
  if (!in) throw InputError("cannot open graph file '" + c.graph_path + "'");
  LoadOptions options;
  options.format = c.format == "weighted" ? EdgeListFormat::weighted : EdgeListFormat::plain;
  options.dedupe_symmetric = c.dedupe_symmetric;
  return load_edge_list(in, options);
}

VertexId resolve_vertex(const Graph& graph, std::uint64_t original) {
  auto v = graph.find_original(original);
  if (!v) throw InputError("vertex " + std::to_string(original) + " is not in the graph");
  return *v;
}

EstimatorOptions estimator_options(const Common& c) {
  EstimatorOptions o;
  o.seed = c.seed;
  o.delta = c.delta;
  o.per_sample_budget = c.budget;
  o.threads = c.threads;
  o.keep_sample_errors = c.verbose;
  return o;
}

Bipartition read_bipartition(const std::string& path, const Graph& graph) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open bipartition file '" + path + "'");
  return load_bipartition(in, graph);
}

Json report(const std::vector<std::string>& args, const Graph& graph, Json result,
            std::chrono::steady_clock::time_point start) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = args;
  j["graph"] = graph_summary(graph);
  j["result"] = std::move(result);
  j["wall_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return j;
}

std::vector<double> parse_epsilon_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InputError("bad epsilon '" + item + "' in --epsilon-list");
    values.push_back(value);
  }
  if (values.empty()) throw InputError("--epsilon-list is empty");
  return values;
}

enum class SweepStatistic { avg_matching, log_partition, hardcore };

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Sublinear-time monomer-dimer and hard-core statistics", "mdlocal"};
  app.require_subcommand(1);
  Common c;
  c.threads = default_threads();

  std::uint64_t vertex = 0;
  bool restricted = false;
  int depth_cap = 64;
  auto* marginal = app.add_subcommand("marginal", "Uncovered probability of one vertex");
  add_graph_flags(marginal, c);
  add_estimator_flags(marginal, c);
  marginal->add_option("--vertex", vertex, "Vertex id as in the file")->required();
  marginal->add_flag("--restricted", restricted, "Restrict to vertices ranked above the root");

  auto* logz = app.add_subcommand("logz", "Estimate log Z(G, lambda)");
  add_graph_flags(logz, c);
  add_estimator_flags(logz, c);
  auto* avg = app.add_subcommand("avg-matching", "Estimate the average matching size");
  add_graph_flags(avg, c);
  add_estimator_flags(avg, c);
  auto* entropy = app.add_subcommand("entropy", "Estimate the Gibbs entropy of matchings");
  add_graph_flags(entropy, c);
  add_estimator_flags(entropy, c);
  auto* maxm = app.add_subcommand("max-matching", "Estimate the maximum matching size");
  add_graph_flags(maxm, c);
  add_estimator_flags(maxm, c, false);

  std::string bipartition_path;
  std::optional<double> alpha;
  std::optional<double> activity_override;
  auto* perm = app.add_subcommand("permanent", "Estimate log PERM of a bipartite expander");
  add_graph_flags(perm, c);
  add_estimator_flags(perm, c, false);
  perm->add_option("--bipartition", bipartition_path, "Vertex side table")->required();
  perm->add_option("--alpha", alpha, "Expansion parameter");
  perm->add_option("--activity-override", activity_override, "Use this activity instead");

  auto* hlogz = app.add_subcommand("hardcore-logz", "Estimate log Z_I(G, lambda)");
  add_graph_flags(hlogz, c);
  add_estimator_flags(hlogz, c);
  auto* hmarg = app.add_subcommand("hardcore-marginal", "Unoccupied probability of one vertex");
  add_graph_flags(hmarg, c);
  add_estimator_flags(hmarg, c);
  hmarg->add_option("--vertex", vertex, "Vertex id as in the file")->required();
  hmarg->add_flag("--restricted", restricted, "Restrict to vertices ranked above the root");
  hmarg->add_option("--depth-cap", depth_cap, "Maximum walk-tree depth")
      ->check(CLI::PositiveNumber);

  bool exact_hardcore_flag = false;
  bool exact_permanent_flag = false;
  auto* exact = app.add_subcommand("exact", "Brute-force statistics for small graphs");
  add_graph_flags(exact, c);
  exact->add_option("--lambda", c.lambda, "Activity");
  exact->add_flag("--hardcore", exact_hardcore_flag, "Also compute the hard-core partition");
  exact->add_flag("--permanent", exact_permanent_flag, "Also compute the permanent");
  exact->add_option("--bipartition", bipartition_path, "Vertex side table");

  std::string epsilon_list;
  std::string statistic = "avg-matching";
  std::string output_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "Time and queries over a list of epsilons");
  add_graph_flags(sweep, c);
  add_estimator_flags(sweep, c);
  sweep->add_option("--epsilon-list", epsilon_list, "Comma-separated epsilons")->required();
  sweep->add_option("--statistic", statistic)
      ->check(CLI::IsMember({"avg-matching", "logz", "hardcore-logz"}));
  sweep->add_option("--output-format", output_format)->check(CLI::IsMember({"csv", "json"}));

  std::size_t gen_vertices = 0;
  std::size_t gen_degree = 3;
  std::string gen_output;
  auto* gen = app.add_subcommand("gen", "Write a random regular graph as an edge list");
  gen->add_option("--vertices", gen_vertices, "Vertex count")->required();
  gen->add_option("--degree", gen_degree, "Degree");
  gen->add_option("--seed", c.seed, "Random seed");
  gen->add_option("--output", gen_output, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) {
      const Graph g = random_regular_graph(gen_vertices, gen_degree, c.seed);
      std::ostringstream text;
      text << "# random " << gen_degree << "-regular graph, n=" << gen_vertices
           << " seed=" << c.seed << "\n";
      write_edge_list(text, g);
      if (gen_output.empty()) {
        out << text.str();
      } else {
        std::ofstream file(gen_output);
        if (!file) throw InputError("cannot write '" + gen_output + "'");
        file << text.str();
      }
      return kExitOk;
    }

    const Graph graph = load_graph(c);
    const EstimatorOptions options = estimator_options(c);

    auto emit = [&](const EstimateResult& r) {
      out << report(args, graph, to_json(r, c.verbose), start).dump(2) << "\n";
      return r.certified ? kExitOk : kExitUncertified;
    };

    if (marginal->parsed() || hmarg->parsed()) {
      const VertexId v = resolve_vertex(graph, vertex);
      std::optional<std::uint64_t> budget = c.budget;
      if (hmarg->parsed() && !budget && !HardcoreParams::for_graph(graph, c.lambda).below_critical()) {
        budget = kSupercriticalBudget;
      }
      OracleSession session(graph, budget);
      const VertexOrder order(c.seed);
      const VertexOrder* restriction = restricted ? &order : nullptr;
      Json result;
      MarginalEstimate m;
      if (marginal->parsed()) {
        m = approx_marginal(session, v, Activity::per_edge(graph, c.lambda), c.epsilon,
                            restriction);
      } else {
        m = approx_marginal_hardcore(session, v, c.lambda, c.epsilon, restriction, depth_cap);
      }
      result = to_json(m);
      result["vertex"] = vertex;
      if (marginal->parsed() && graph.max_degree() > 0) {
        result["depth_bound"] = depth_bound(c.epsilon, graph.max_degree(),
                                            Activity::per_edge(graph, c.lambda).max());
      }
      out << report(args, graph, result, start).dump(2) << "\n";
      return m.certified ? kExitOk : kExitUncertified;
    }
    if (logz->parsed()) {
      return emit(estimate_log_partition(graph, Activity::per_edge(graph, c.lambda), c.epsilon,
                                         options));
    }
    if (avg->parsed()) {
      return emit(estimate_avg_matching_size(graph, Activity::per_edge(graph, c.lambda),
                                             c.epsilon, options));
    }
    if (entropy->parsed()) {
      if (graph.has_activities()) {
        throw InputError("entropy needs a uniform activity; load the graph as plain");
      }
      return emit(estimate_entropy(graph, c.lambda, c.epsilon, options));
    }
    if (maxm->parsed()) {
      EstimateResult r = estimate_max_matching(graph, c.epsilon, options);
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      return emit(r);
    }
    if (perm->parsed()) {
      if (!alpha && !activity_override) {
        throw InputError("permanent needs --alpha or --activity-override");
      }
      const Bipartition sides = read_bipartition(bipartition_path, graph);
      return emit(estimate_log_permanent(graph, sides, c.epsilon, alpha.value_or(1.0), options,
                                         activity_override));
    }
    if (hlogz->parsed()) {
      EstimateResult r = estimate_log_partition_hardcore(graph, c.lambda, c.epsilon, options);
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      return emit(r);
    }
    if (exact->parsed()) {
      const Activity activity = Activity::per_edge(graph, c.lambda);
      Json result = to_json(exact_partition(graph, activity), graph);
      result["lambda"] = activity.max();
      if (exact_hardcore_flag) {
        const HardcoreExact h = exact_hardcore(graph, c.lambda);
        result["hardcore"] = {{"Z", h.z}, {"log_Z", h.log_z}, {"marginals", h.marginals}};
      }
      if (exact_permanent_flag) {
        if (bipartition_path.empty()) throw InputError("--permanent needs --bipartition");
        result["permanent"] =
            exact_permanent(graph, read_bipartition(bipartition_path, graph)).str();
      }
      out << report(args, graph, result, start).dump(2) << "\n";
      return kExitOk;
    }
    if (sweep->parsed()) {
      const std::vector<double> epsilons = parse_epsilon_list(epsilon_list);
      const SweepStatistic which = statistic == "logz"            ? SweepStatistic::log_partition
                                   : statistic == "hardcore-logz" ? SweepStatistic::hardcore
                                                                  : SweepStatistic::avg_matching;
      Json rows = Json::array();
      bool all_certified = true;
      for (double eps : epsilons) {
        EstimateResult r;
        switch (which) {
          case SweepStatistic::avg_matching:
            r = estimate_avg_matching_size(graph, Activity::per_edge(graph, c.lambda), eps,
                                           options);
            break;
          case SweepStatistic::log_partition:
            r = estimate_log_partition(graph, Activity::per_edge(graph, c.lambda), eps, options);
            break;
          case SweepStatistic::hardcore:
            r = estimate_log_partition_hardcore(graph, c.lambda, eps, options);
            break;
        }
        all_certified = all_certified && r.certified;
        rows.push_back({{"inv_epsilon", 1.0 / eps},
                        {"epsilon", eps},
                        {"time_ms", r.runtime_ms},
                        {"queries", r.queries},
                        {"samples", r.samples},
                        {"estimate", r.estimate},
                        {"additive_bound", r.additive_bound},
                        {"certified", r.certified}});
      }
      if (output_format == "json") {
        Json result;
        result["statistic"] = statistic;
        result["rows"] = rows;
        out << report(args, graph, result, start).dump(2) << "\n";
      } else {
        out << "inv_epsilon,epsilon,time_ms,queries,samples,estimate,additive_bound,certified\n";
        for (const auto& row : rows) {
          out << row["inv_epsilon"].get<double>() << ',' << row["epsilon"].get<double>() << ','
              << row["time_ms"].get<double>() << ',' << row["queries"].get<std::uint64_t>()
              << ',' << row["samples"].get<std::size_t>() << ','
              << row["estimate"].get<double>() << ',' << row["additive_bound"].get<double>()
              << ',' << (row["certified"].get<bool>() ? 1 : 0) << "\n";
        }
      }
      return all_certified ? kExitOk : kExitUncertified;
    }
  } catch (const InputError& e) {
    err << Json{{"error", e.what()}, {"kind", "input"}}.dump() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << Json{{"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace mdlocal::cli
