#pragma once

#include <cstdint>
#include <span>

#include "mdlocal/graph.hpp"
#include "mdlocal/order.hpp"

namespace mdlocal {

/// Dimer activity: a uniform lambda, or the graph's per-edge activities
/// times a scale. Per-edge activities are borrowed from the Graph and must
/// not outlive it.
class Activity {
 public:
  static Activity uniform(double lambda);
  static Activity per_edge(const Graph& graph, double scale = 1.0);

  double of_edge(EdgeId e) const { return edge_.empty() ? scale_ : scale_ * edge_[e]; }
  double max() const { return max_; }
  bool is_uniform() const { return edge_.empty(); }

 private:
  Activity(double scale, std::span<const double> edge, double max)
      : scale_(scale), edge_(edge), max_(max) {}

  double scale_;
  std::span<const double> edge_;
  double max_;
};

// Probability that a vertex is left uncovered, bracketed by the last two
// path-tree iterates.
struct MarginalEstimate {
  double value = 1.0;
  double lower = 0.0;
  double upper = 1.0;
  int depth = 0;
  std::uint64_t queries = 0;
  double log_gap = 0.0;
  // False when the query budget stopped the iteration, or when the log gap
  // hit floating-point resolution before reaching the tolerance.
  bool certified = true;
  bool precision_limited = false;

  double error_bound() const { return upper - lower; }
};

// Value at the root of the path-tree of `root` truncated at `depth` levels:
// nodes on level `depth` are fixed to 1, so depth 1 returns 1. With a
// restriction order only vertices ranking at or above `root` are explored.
double path_tree_value(OracleSession& session, VertexId root, int depth,
                       const Activity& activity, const VertexOrder* restriction = nullptr);

// Deepens the path-tree until consecutive iterates agree to epsilon/e in log
// scale. Budget exhaustion yields an uncertified estimate instead of throwing.
MarginalEstimate approx_marginal(OracleSession& session, VertexId root, const Activity& activity,
                                 double epsilon, const VertexOrder* restriction = nullptr);

// Smallest depth at which the worst-case correlation-decay bound
// (1 - 2/(sqrt(1+lambda*D)+1))^(h/2) * log(1+lambda*D) drops to epsilon.
// Diagnostics only; approx_marginal stops adaptively.
int depth_bound(double epsilon, std::size_t max_degree, double lambda);

}  // namespace mdlocal
