#pragma once

#include "mdlocal/estimators.hpp"
#include "mdlocal/graph.hpp"
#include "mdlocal/matching_marginal.hpp"
#include "mdlocal/order.hpp"

namespace mdlocal {

// Uniqueness threshold d^d / (d-1)^(d+1) for graphs of maximum degree d + 1.
// Infinite for d <= 1.
double critical_activity(std::size_t recursion_degree);

struct HardcoreParams {
  double lambda = 1.0;
  std::size_t recursion_degree = 0;
  double critical = 0.0;

  static HardcoreParams for_graph(const Graph& graph, double lambda);
  bool below_critical() const { return lambda < critical; }
};

struct Brackets {
  double low = 0.0;
  double high = 1.0;
};

// Unoccupied probability at the root of the self-avoiding-walk tree of
// `root`, truncated at `depth` levels (level `depth` fixed to 1). Cycle
// closures become pinned leaves; self-looped vertices can never be occupied.
double saw_tree_value(OracleSession& session, VertexId root, double lambda, int depth,
                      const VertexOrder* restriction = nullptr);

// Truncations at `depth` and `depth + 1`, ordered low <= high.
Brackets saw_marginal_brackets(OracleSession& session, VertexId root, double lambda, int depth,
                               const VertexOrder* restriction = nullptr);

// Deepens until log(high) - log(low) <= epsilon and returns the geometric
// midpoint. Gives up uncertified after `depth_cap` levels or on budget loss.
MarginalEstimate approx_marginal_hardcore(OracleSession& session, VertexId root, double lambda,
                                          double epsilon,
                                          const VertexOrder* restriction = nullptr,
                                          int depth_cap = 64);

// Per-sample query cap applied above the critical activity when the caller set
// none: brackets need not contract there and the walk tree grows exponentially.
inline constexpr std::uint64_t kSupercriticalBudget = 1'000'000;

// log Z_I(G, lambda) within epsilon * n; only certified below the critical activity.
EstimateResult estimate_log_partition_hardcore(const Graph& graph, double lambda, double epsilon,
                                               const EstimatorOptions& options = {});

}  // namespace mdlocal
