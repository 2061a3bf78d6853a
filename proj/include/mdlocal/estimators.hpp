#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdlocal/graph.hpp"
#include "mdlocal/matching_marginal.hpp"

namespace mdlocal {

enum class StatisticKind {
  log_partition,
  avg_matching,
  entropy,
  max_matching,
  log_permanent,
  log_partition_hardcore,
};

std::string_view to_string(StatisticKind kind);

/// Hoeffding sample count for averaging values spread over `value_range`
/// to within epsilon/2 with probability 1 - delta:
///   s = ceil(range^2 * ln(2/delta) / (2 * (epsilon/2)^2)), at least 1.
/// Deliberately independent of the graph size.
class SampleSchedule {
 public:
  SampleSchedule(double epsilon, double delta, double value_range, std::uint64_t seed);

  std::size_t size() const { return size_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double value_range() const { return value_range_; }
  std::uint64_t seed() const { return seed_; }

  // The index-th vertex of the multiset, uniform over [0, num_vertices).
  VertexId vertex(std::size_t index, std::size_t num_vertices) const;
  // Seed of the random vertex order used by restricted marginals.
  std::uint64_t order_seed() const;

 private:
  double epsilon_;
  double delta_;
  double value_range_;
  std::uint64_t seed_;
  std::size_t size_;
};

// Per-sample contribution after evaluating one marginal.
struct SampleOutcome {
  double value = 0.0;
  // Bracket width in the units of `value`.
  double error = 0.0;
  bool certified = true;
  std::uint64_t queries = 0;
};

/// Memo of per-vertex sample outcomes, keyed by a digest of every parameter
/// the outcome depends on except the graph itself, so a cache belongs to one
/// graph. Sharing one across runs never changes an estimate, only how many
/// oracle queries are spent producing it.
class SampleCache {
 public:
  std::optional<SampleOutcome> find(std::uint64_t context, VertexId v) const;
  void insert(std::uint64_t context, VertexId v, const SampleOutcome& outcome);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::uint64_t, VertexId>, SampleOutcome> entries_;
};

struct EstimatorOptions {
  std::uint64_t seed = 0;
  double delta = 0.1;
  // Per-sample oracle query cap. Exhaustion makes the run uncertified.
  std::optional<std::uint64_t> per_sample_budget;
  unsigned threads = 1;
  // When set, repeated sample vertices reuse earlier outcomes.
  SampleCache* cache = nullptr;
  bool keep_sample_errors = false;
};

struct EstimateResult {
  StatisticKind kind = StatisticKind::log_partition;
  double estimate = 0.0;
  double additive_bound = 0.0;
  double confidence = 0.0;
  bool certified = true;
  std::uint64_t queries = 0;
  std::size_t samples = 0;
  double lambda = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::size_t budget_exhausted_samples = 0;
  // Mean bracket width over samples; the budgeted-mode error indicator.
  double mean_sample_error = 0.0;
  std::vector<double> sample_errors;
  std::vector<std::string> warnings;
  double runtime_ms = 0.0;
};

// log Z(G, lambda) within epsilon * n with probability 1 - delta.
EstimateResult estimate_log_partition(const Graph& graph, const Activity& activity,
                                      double epsilon, const EstimatorOptions& options = {});

// Average matching size E(G, lambda) within epsilon * n.
EstimateResult estimate_avg_matching_size(const Graph& graph, const Activity& activity,
                                          double epsilon, const EstimatorOptions& options = {});

// Gibbs entropy S = log Z - log(lambda) * E within epsilon * n.
EstimateResult estimate_entropy(const Graph& graph, double lambda, double epsilon,
                                const EstimatorOptions& options = {});

// 2^(D/epsilon); throws InputError when that overflows.
double max_matching_activity(std::size_t max_degree, double epsilon);

// Maximum matching size within epsilon * n, via E(G, lambda*) at
// lambda* = exp(D * log 2 / epsilon). Cost grows doubly exponentially in D/epsilon.
EstimateResult estimate_max_matching(const Graph& graph, double epsilon,
                                     const EstimatorOptions& options = {});

// Side (0 or 1) of every vertex of a balanced bipartite graph.
struct Bipartition {
  std::vector<std::uint8_t> side;

  // Throws InputError unless both sides have the same size.
  void validate(const Graph& graph) const;
};

Bipartition load_bipartition(std::istream& in, const Graph& graph);

// Activity used for the permanent: max(1, 2 log D / (epsilon log(1 + alpha))).
double permanent_activity(std::size_t max_degree, double epsilon, double alpha);

// log PERM of a bipartite alpha-expander, one-sided: the estimate
// log Z - (n/2) log lambda never undershoots log PERM beyond sampling error.
EstimateResult estimate_log_permanent(const Graph& graph, const Bipartition& sides,
                                      double epsilon, double alpha,
                                      const EstimatorOptions& options = {},
                                      std::optional<double> activity_override = std::nullopt);

}  // namespace mdlocal
