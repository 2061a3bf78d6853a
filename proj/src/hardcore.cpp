#include "mdlocal/hardcore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "mdlocal/detail/sampling.hpp"
#include "mdlocal/errors.hpp"

namespace mdlocal {

double critical_activity(std::size_t recursion_degree) {
  if (recursion_degree <= 1) return std::numeric_limits<double>::infinity();
  const double d = static_cast<double>(recursion_degree);
  return std::pow(d, d) / std::pow(d - 1.0, d + 1.0);
}

HardcoreParams HardcoreParams::for_graph(const Graph& graph, double lambda) {
  HardcoreParams p;
  p.lambda = lambda;
  p.recursion_degree = graph.max_degree() > 0 ? graph.max_degree() - 1 : 0;
  p.critical = critical_activity(p.recursion_degree);
  return p;
}

namespace {

// Walk-tree evaluation over the simple graph underlying the multigraph.
//
// Each path level keeps the distinct neighbors of its vertex in first-seen
// order; a neighbor's position there is its rank. When the walk at u reaches
// a vertex w already on the path (other than u's parent), the copy of w is a
// leaf pinned occupied if u ranks after the neighbor the walk used to leave
// w, and unoccupied otherwise.
class SawTree {
 public:
  SawTree(OracleSession& session, double lambda, const VertexOrder* restriction, VertexId root,
          int depth)
      : session_(session), lambda_(lambda), restriction_(restriction), root_(root),
        depth_(depth) {}

  double evaluate() { return visit(root_, 1); }

 private:
  struct Level {
    VertexId vertex;
    std::vector<VertexId> neighbors;
  };

  static std::size_t rank(const Level& level, VertexId w) {
    return static_cast<std::size_t>(
        std::find(level.neighbors.begin(), level.neighbors.end(), w) - level.neighbors.begin());
  }

  double visit(VertexId u, int depth) {
    if (depth == depth_) return 1.0;
    Level level{u, {}};
    bool looped = false;
    const std::size_t degree = session_.degree(u);
    for (std::size_t i = 1; i <= degree; ++i) {
      const VertexId w = session_.neighbor(u, i).vertex;
      if (w == u) {
        looped = true;
        continue;
      }
      if (restriction_ && !restriction_->precedes(w, root_)) continue;
      if (std::find(level.neighbors.begin(), level.neighbors.end(), w) == level.neighbors.end()) {
        level.neighbors.push_back(w);
      }
    }
    if (looped) return 1.0;

    path_.push_back(std::move(level));
    const std::size_t me = path_.size() - 1;
    double product = 1.0;
    for (std::size_t k = 0; k < path_[me].neighbors.size() && product > 0.0; ++k) {
      const VertexId w = path_[me].neighbors[k];
      if (me > 0 && w == path_[me - 1].vertex) continue;
      std::size_t j = 0;
      while (j < me && path_[j].vertex != w) ++j;
      if (j < me) {
        // Cycle closed at path_[j]: compare the closing step with the one
        // that left w along the walk.
        const bool occupied = rank(path_[j], u) > rank(path_[j], path_[j + 1].vertex);
        if (occupied) product = 0.0;
        continue;
      }
      product *= visit(w, depth + 1);
    }
    path_.pop_back();
    return 1.0 / (1.0 + lambda_ * product);
  }

  OracleSession& session_;
  double lambda_;
  const VertexOrder* restriction_;
  VertexId root_;
  int depth_;
  std::vector<Level> path_;
};

void require_root(const OracleSession& session, VertexId root) {
  if (root >= session.graph().num_vertices()) {
    throw InputError("vertex " + std::to_string(root) + " out of range");
  }
}

}  // namespace

double saw_tree_value(OracleSession& session, VertexId root, double lambda, int depth,
                      const VertexOrder* restriction) {
  if (depth < 1) throw InputError("walk-tree depth must be at least 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
  require_root(session, root);
  try {
    return SawTree(session, lambda, restriction, root, depth).evaluate();
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted(e.budget(), depth);
  }
}

Brackets saw_marginal_brackets(OracleSession& session, VertexId root, double lambda, int depth,
                               const VertexOrder* restriction) {
  const double a = saw_tree_value(session, root, lambda, depth, restriction);
  const double b = saw_tree_value(session, root, lambda, depth + 1, restriction);
  return {std::min(a, b), std::max(a, b)};
}

MarginalEstimate approx_marginal_hardcore(OracleSession& session, VertexId root, double lambda,
                                          double epsilon, const VertexOrder* restriction,
                                          int depth_cap) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
  require_root(session, root);
  const std::uint64_t start = session.query_count();

  MarginalEstimate out;
  out.certified = false;
  // Depth 1 is the trivial upper bound; the marginal is never below 1/(1+lambda).
  double previous = 1.0;
  double current = 1.0;
  int depth = 1;
  try {
    while (depth < depth_cap) {
      const double next = saw_tree_value(session, root, lambda, depth + 1, restriction);
      previous = current;
      current = next;
      ++depth;
      if (std::log(std::max(previous, current)) - std::log(std::min(previous, current)) <=
          epsilon) {
        out.certified = true;
        break;
      }
    }
  } catch (const BudgetExhausted&) {
    if (depth == 1) previous = 1.0 / (1.0 + lambda);
  }
  out.lower = std::min(previous, current);
  out.upper = std::max(previous, current);
  out.value = std::sqrt(out.lower * out.upper);
  out.depth = depth;
  out.log_gap = std::log(out.upper) - std::log(out.lower);
  out.queries = session.query_count() - start;
  return out;
}

EstimateResult estimate_log_partition_hardcore(const Graph& graph, double lambda, double epsilon,
                                               const EstimatorOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (graph.num_vertices() == 0) throw InputError("graph has no vertices");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive");
  const HardcoreParams params = HardcoreParams::for_graph(graph, lambda);
  const double n = static_cast<double>(graph.num_vertices());
  // -log p lies in [0, log(1 + lambda)].
  const SampleSchedule schedule(epsilon, options.delta, std::log1p(lambda), options.seed);
  const double tolerance = epsilon / 2.0;
  EstimatorOptions run = options;
  if (!params.below_critical() && !run.per_sample_budget) {
    run.per_sample_budget = kSupercriticalBudget;
  }

  std::uint64_t context = detail::mix(0x68617264636f7265ULL, lambda);
  context = detail::mix(context, tolerance);
  context = detail::mix(context, run.per_sample_budget.value_or(0));
  context = detail::mix(context, schedule.order_seed());

  auto totals = detail::run_samples(
      graph, schedule, run, context, {},
      [&](OracleSession& session, VertexId v, const VertexOrder& order) {
        const MarginalEstimate m =
            approx_marginal_hardcore(session, v, lambda, tolerance, &order);
        return SampleOutcome{-std::log(m.value), m.log_gap, m.certified, 0};
      });

  EstimateResult result;
  result.kind = StatisticKind::log_partition_hardcore;
  result.estimate = n / static_cast<double>(schedule.size()) * totals.sum;
  result.lambda = lambda;
  result.epsilon = epsilon;
  result.queries = totals.queries;
  result.samples = schedule.size();
  result.delta = options.delta;
  result.confidence = 1.0 - options.delta;
  result.seed = options.seed;
  result.budget_exhausted_samples = totals.uncertified;
  result.mean_sample_error = totals.error_sum / static_cast<double>(schedule.size());
  result.sample_errors = totals.errors;
  result.certified = totals.uncertified == 0 && params.below_critical();
  if (!params.below_critical()) {
    result.warnings.push_back("lambda is at or above the critical activity " +
                              std::to_string(params.critical) +
                              " for this maximum degree; result is not certified");
  }
  if (totals.uncertified > 0) {
    result.warnings.push_back(std::to_string(totals.uncertified) + " of " +
                              std::to_string(schedule.size()) +
                              " samples stopped before their brackets contracted");
  }
  result.additive_bound = totals.uncertified == 0
                              ? epsilon * n
                              : n * (epsilon / 2.0 + result.mean_sample_error / 2.0);
  result.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace mdlocal
