#include "mdlocal/exact_oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mdlocal/errors.hpp"

namespace mdlocal {

namespace {

using Mask = std::uint32_t;

void require_small(const Graph& graph) {
  if (graph.num_vertices() > kExactVertexCap) {
    throw InputError("exact oracle supports at most " + std::to_string(kExactVertexCap) +
                     " vertices, got " + std::to_string(graph.num_vertices()));
  }
}

Mask full_mask(const Graph& graph) {
  return graph.num_vertices() == 32 ? ~Mask{0} : (Mask{1} << graph.num_vertices()) - 1;
}

// Matching polynomial with exact integer coefficients.
class MatchingCounter {
 public:
  explicit MatchingCounter(const Graph& graph) : graph_(graph) {}

  const std::vector<BigInt>& counts(Mask mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    std::vector<BigInt> result{1};
    if (mask != 0) {
      const VertexId v = static_cast<VertexId>(std::countr_zero(mask));
      const Mask rest = mask & ~(Mask{1} << v);
      result = counts(rest);
      for (const HalfEdge& h : graph_.incident(v)) {
        if (h.vertex == v || !(rest >> h.vertex & 1u)) continue;
        const auto& sub = counts(rest & ~(Mask{1} << h.vertex));
        if (result.size() < sub.size() + 1) result.resize(sub.size() + 1);
        for (std::size_t k = 0; k < sub.size(); ++k) result[k + 1] += sub[k];
      }
    }
    return memo_.emplace(mask, std::move(result)).first->second;
  }

 private:
  const Graph& graph_;
  std::unordered_map<Mask, std::vector<BigInt>> memo_;
};

// Weighted sums over matchings, by size: w_k = sum_{|M|=k} prod lambda_e, and
// the entropy helper L = sum_M w(M) log w(M).
struct WeightedSums {
  std::vector<long double> by_size{1.0L};
  long double log_weighted = 0.0L;

  long double total() const {
    long double z = 0.0L;
    for (auto w : by_size) z += w;
    return z;
  }
};

class WeightedCounter {
 public:
  WeightedCounter(const Graph& graph, const Activity& activity)
      : graph_(graph), activity_(activity) {}

  const WeightedSums& sums(Mask mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    WeightedSums result;
    if (mask != 0) {
      const VertexId v = static_cast<VertexId>(std::countr_zero(mask));
      const Mask rest = mask & ~(Mask{1} << v);
      result = sums(rest);
      for (const HalfEdge& h : graph_.incident(v)) {
        if (h.vertex == v || !(rest >> h.vertex & 1u)) continue;
        const WeightedSums& sub = sums(rest & ~(Mask{1} << h.vertex));
        const long double a = activity_.of_edge(h.edge);
        if (result.by_size.size() < sub.by_size.size() + 1) {
          result.by_size.resize(sub.by_size.size() + 1, 0.0L);
        }
        for (std::size_t k = 0; k < sub.by_size.size(); ++k) {
          result.by_size[k + 1] += a * sub.by_size[k];
        }
        result.log_weighted += a * (std::log(a) * sub.total() + sub.log_weighted);
      }
    }
    return memo_.emplace(mask, std::move(result)).first->second;
  }

 private:
  const Graph& graph_;
  const Activity& activity_;
  std::unordered_map<Mask, WeightedSums> memo_;
};

// log sum_k m_k lambda^k, stable for large lambda.
long double log_polynomial(const std::vector<BigInt>& counts, long double log_lambda) {
  long double peak = -std::numeric_limits<long double>::infinity();
  std::vector<long double> terms;
  terms.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      terms.push_back(-std::numeric_limits<long double>::infinity());
      continue;
    }
    const long double t =
        std::log(counts[k].convert_to<long double>()) + static_cast<long double>(k) * log_lambda;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  long double sum = 0.0L;
  for (auto t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

}  // namespace

ExactStats exact_partition(const Graph& graph, const Activity& activity) {
  require_small(graph);
  const std::size_t n = graph.num_vertices();
  const Mask all = full_mask(graph);
  ExactStats stats;
  MatchingCounter counter(graph);
  stats.matching_counts = counter.counts(all);
  for (std::size_t k = stats.matching_counts.size(); k-- > 0;) {
    if (stats.matching_counts[k] != 0) {
      stats.max_matching = k;
      break;
    }
  }
  stats.marginals.resize(n);

  if (activity.is_uniform()) {
    const long double lambda = activity.max();
    const long double log_lambda = std::log(lambda);
    const long double log_z = log_polynomial(stats.matching_counts, log_lambda);
    stats.log_z = static_cast<double>(log_z);
    stats.z = static_cast<double>(std::exp(log_z));
    long double mean = 0.0L;
    long double entropy = 0.0L;
    for (std::size_t k = 0; k < stats.matching_counts.size(); ++k) {
      if (stats.matching_counts[k] == 0) continue;
      // Each size-k matching has probability lambda^k / Z.
      const long double log_pi = static_cast<long double>(k) * log_lambda - log_z;
      const long double mass =
          stats.matching_counts[k].convert_to<long double>() * std::exp(log_pi);
      mean += static_cast<long double>(k) * mass;
      entropy -= mass * log_pi;
    }
    stats.avg_size = static_cast<double>(mean);
    stats.entropy = static_cast<double>(entropy);
    for (VertexId v = 0; v < n; ++v) {
      const auto& without = counter.counts(all & ~(Mask{1} << v));
      stats.marginals[v] = static_cast<double>(std::exp(log_polynomial(without, log_lambda) - log_z));
    }
    return stats;
  }

  WeightedCounter weighted(graph, activity);
  const WeightedSums& sums = weighted.sums(all);
  const long double z = sums.total();
  stats.z = static_cast<double>(z);
  stats.log_z = static_cast<double>(std::log(z));
  long double mean = 0.0L;
  for (std::size_t k = 0; k < sums.by_size.size(); ++k) {
    mean += static_cast<long double>(k) * sums.by_size[k];
  }
  stats.avg_size = static_cast<double>(mean / z);
  stats.entropy = static_cast<double>(std::log(z) - sums.log_weighted / z);
  for (VertexId v = 0; v < n; ++v) {
    stats.marginals[v] = static_cast<double>(weighted.sums(all & ~(Mask{1} << v)).total() / z);
  }
  return stats;
}

double exact_marginal(const Graph& graph, const Activity& activity, VertexId v) {
  if (v >= graph.num_vertices()) throw InputError("vertex out of range");
  return exact_partition(graph, activity).marginals[v];
}

HardcoreExact exact_hardcore(const Graph& graph, double lambda) {
  require_small(graph);
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const std::size_t n = graph.num_vertices();
  std::vector<Mask> closed(n, 0);
  std::vector<char> looped(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    closed[v] = Mask{1} << v;
    for (const HalfEdge& h : graph.incident(v)) {
      closed[v] |= Mask{1} << h.vertex;
      if (h.vertex == v) looped[v] = 1;
    }
  }
  std::unordered_map<Mask, long double> memo;
  auto z = [&](auto&& self, Mask mask) -> long double {
    if (mask == 0) return 1.0L;
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const VertexId v = static_cast<VertexId>(std::countr_zero(mask));
    long double value = self(self, mask & ~(Mask{1} << v));
    if (!looped[v]) value += static_cast<long double>(lambda) * self(self, mask & ~closed[v]);
    memo.emplace(mask, value);
    return value;
  };
  const Mask all = full_mask(graph);
  HardcoreExact out;
  const long double total = z(z, all);
  out.z = static_cast<double>(total);
  out.log_z = static_cast<double>(std::log(total));
  out.marginals.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    out.marginals[v] = static_cast<double>(z(z, all & ~(Mask{1} << v)) / total);
  }
  return out;
}

BigInt exact_permanent(const Graph& graph, const Bipartition& sides) {
  sides.validate(graph);
  const std::size_t half = graph.num_vertices() / 2;
  if (half > kPermanentSideCap) {
    throw InputError("permanent supports at most " + std::to_string(kPermanentSideCap) +
                     " vertices per side");
  }
  std::vector<std::size_t> index(graph.num_vertices());
  std::size_t left = 0, right = 0;
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    index[v] = sides.side[v] == 0 ? left++ : right++;
  }
  std::vector<std::vector<std::int64_t>> a(half, std::vector<std::int64_t>(half, 0));
  for (const Edge& e : graph.edges()) {
    if (sides.side[e.u] == sides.side[e.v]) {
      throw InputError("graph is not bipartite under the given sides");
    }
    const VertexId l = sides.side[e.u] == 0 ? e.u : e.v;
    const VertexId r = sides.side[e.u] == 0 ? e.v : e.u;
    a[index[l]][index[r]] += 1;
  }
  if (half == 0) return BigInt{1};

  // Ryser: perm = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij.
  BigInt total = 0;
  const std::uint32_t subsets = std::uint32_t{1} << half;
  std::vector<std::int64_t> row_sums(half, 0);
  for (std::uint32_t s = 1; s < subsets; ++s) {
    // Gray-code walk: one column toggles per step.
    const std::uint32_t gray = s ^ (s >> 1);
    const std::uint32_t prev = (s - 1) ^ ((s - 1) >> 1);
    const auto col = static_cast<std::size_t>(std::countr_zero(gray ^ prev));
    const std::int64_t sign_in = (gray >> col & 1u) ? 1 : -1;
    for (std::size_t i = 0; i < half; ++i) row_sums[i] += sign_in * a[i][col];
    BigInt product = 1;
    for (std::size_t i = 0; i < half && product != 0; ++i) product *= row_sums[i];
    if (std::popcount(gray) % 2 == 1) {
      total -= product;
    } else {
      total += product;
    }
  }
  return half % 2 == 1 ? BigInt(-total) : total;
}

double tree_fixture_y(double lambda, std::size_t branching, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  const double load = lambda * static_cast<double>(branching);
  double y = 1.0;
  for (int i = 2; i <= k; ++i) y = 1.0 / (1.0 + load * y);
  return y;
}

double tree_fixture_limit(double lambda, std::size_t branching) {
  return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * lambda * static_cast<double>(branching)));
}

double tree_fixture_f(double lambda, std::size_t branching, int k) {
  if (k < 1) throw InputError("k must be at least 1");
  const double load = lambda * static_cast<double>(branching);
  double older = 1.0, old = 1.0;
  for (int i = 3; i <= k; ++i) {
    const double next = old + load * older;
    older = old;
    old = next;
  }
  return old;
}

double tree_fixture_f_closed(double lambda, std::size_t branching, int k) {
  const double root = std::sqrt(1.0 + 4.0 * lambda * static_cast<double>(branching));
  const double alpha = (1.0 + root) / 2.0;
  const double beta = (1.0 - root) / 2.0;
  return (std::pow(alpha, k) - std::pow(beta, k)) / (2.0 * alpha - 1.0);
}

Graph full_tree(std::size_t branching, int levels) {
  if (levels < 1) throw InputError("tree needs at least one level");
  std::vector<Edge> edges;
  std::size_t level_start = 0, level_size = 1, next = 1;
  for (int l = 1; l < levels; ++l) {
    for (std::size_t p = level_start; p < level_start + level_size; ++p) {
      for (std::size_t c = 0; c < branching; ++c) {
        edges.push_back({static_cast<VertexId>(p), static_cast<VertexId>(next++)});
      }
    }
    level_start += level_size;
    level_size *= branching;
  }
  return Graph(next, std::move(edges));
}

}  // namespace mdlocal
