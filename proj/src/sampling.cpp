#include <bit>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mdlocal/detail/sampling.hpp"
#include "mdlocal/rng.hpp"

namespace mdlocal::detail {

std::uint64_t mix(std::uint64_t digest, std::uint64_t value) {
  return rng::splitmix64(digest ^ rng::splitmix64(value));
}

std::uint64_t mix(std::uint64_t digest, double value) {
  return mix(digest, std::bit_cast<std::uint64_t>(value));
}

namespace {

template <class Body>
void parallel_for(std::size_t count, unsigned threads, const Body& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) body(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace

SampleTotals run_samples(const Graph& graph, const SampleSchedule& schedule,
                         const EstimatorOptions& options, std::uint64_t cache_context,
                         const OracleSession::EdgeCheck& edge_check, const SampleFn& fn) {
  const std::size_t n = graph.num_vertices();
  const std::size_t s = schedule.size();
  const VertexOrder order(schedule.order_seed());

  std::vector<VertexId> sampled(s);
  for (std::size_t i = 0; i < s; ++i) sampled[i] = schedule.vertex(i, n);

  auto evaluate = [&](VertexId v) {
    OracleSession session(graph, options.per_sample_budget);
    if (edge_check) session.set_edge_check(edge_check);
    SampleOutcome outcome = fn(session, v, order);
    outcome.queries = session.query_count();
    return outcome;
  };

  std::vector<SampleOutcome> outcomes(s);
  std::vector<std::uint64_t> charged(s, 0);
  if (options.cache == nullptr) {
    parallel_for(s, options.threads, [&](std::size_t i) {
      outcomes[i] = evaluate(sampled[i]);
      charged[i] = outcomes[i].queries;
    });
  } else {
    // First occurrence of each vertex does the work; later ones reuse it.
    std::vector<std::size_t> work;
    std::unordered_map<VertexId, std::size_t> first;
    for (std::size_t i = 0; i < s; ++i) {
      if (first.try_emplace(sampled[i], i).second) work.push_back(i);
    }
    std::vector<char> hit(s, 0);
    for (std::size_t i : work) {
      if (auto cached = options.cache->find(cache_context, sampled[i])) {
        outcomes[i] = *cached;
        hit[i] = 1;
      }
    }
    parallel_for(work.size(), options.threads, [&](std::size_t k) {
      const std::size_t i = work[k];
      if (hit[i]) return;
      outcomes[i] = evaluate(sampled[i]);
      charged[i] = outcomes[i].queries;
    });
    for (std::size_t i : work) {
      if (!hit[i]) options.cache->insert(cache_context, sampled[i], outcomes[i]);
    }
    for (std::size_t i = 0; i < s; ++i) outcomes[i] = outcomes[first.at(sampled[i])];
  }

  SampleTotals totals;
  if (options.keep_sample_errors) totals.errors.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    totals.sum += outcomes[i].value;
    totals.error_sum += outcomes[i].error;
    totals.queries += charged[i];
    if (!outcomes[i].certified) ++totals.uncertified;
    if (options.keep_sample_errors) totals.errors.push_back(outcomes[i].error);
  }
  return totals;
}

}  // namespace mdlocal::detail
