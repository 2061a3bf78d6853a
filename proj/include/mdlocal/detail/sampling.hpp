#pragma once

#include <cstdint>
#include <functional>

#include "mdlocal/estimators.hpp"
#include "mdlocal/graph.hpp"
#include "mdlocal/order.hpp"

namespace mdlocal::detail {

using SampleFn =
    std::function<SampleOutcome(OracleSession& session, VertexId v, const VertexOrder& order)>;

struct SampleTotals {
  double sum = 0.0;
  double error_sum = 0.0;
  std::uint64_t queries = 0;
  std::size_t uncertified = 0;
  std::vector<double> errors;
};

// Evaluates `fn` on each vertex of the schedule, one fresh session per
// evaluation, spread over `options.threads` workers. Sums are reduced in
// sample-index order so the result does not depend on scheduling.
SampleTotals run_samples(const Graph& graph, const SampleSchedule& schedule,
                         const EstimatorOptions& options, std::uint64_t cache_context,
                         const OracleSession::EdgeCheck& edge_check, const SampleFn& fn);

// Folds a parameter into a cache-context digest.
std::uint64_t mix(std::uint64_t digest, std::uint64_t value);
std::uint64_t mix(std::uint64_t digest, double value);

}  // namespace mdlocal::detail
