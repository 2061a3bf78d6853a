#include "corpus.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <tuple>

namespace mdtest {

using mdlocal::Edge;
using mdlocal::Graph;
using mdlocal::VertexId;

Graph make_graph(std::size_t n, std::vector<std::pair<int, int>> edges) {
  std::vector<Edge> out;
  for (auto [u, v] : edges) out.push_back({VertexId(u), VertexId(v)});
  return Graph(n, std::move(out));
}

std::vector<CorpusGraph> small_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<CorpusGraph> corpus;
  corpus.push_back({"empty3", make_graph(3, {})});
  corpus.push_back({"K2", make_graph(2, {{0, 1}})});
  corpus.push_back({"P3", make_graph(3, {{0, 1}, {1, 2}})});
  corpus.push_back({"C3", make_graph(3, {{0, 1}, {1, 2}, {2, 0}})});
  corpus.push_back({"C4", make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})});
  corpus.push_back({"K4", make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})});
  corpus.push_back({"double_edge", make_graph(2, {{0, 1}, {0, 1}})});
  corpus.push_back({"loop_path", make_graph(3, {{0, 0}, {0, 1}, {1, 2}})});
  corpus.push_back({"petersen_part", make_graph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                                                     {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},
                                                     {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}})});

  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  while (corpus.size() < count) {
    const int n = uniform(1, 14);
    const int cap = uniform(1, 4);
    // Sparse, medium and near-saturated graphs in roughly equal measure.
    const double fill = std::array<double, 3>{0.4, 0.75, 1.0}[uniform(0, 2)];
    const int target = static_cast<int>(fill * n * cap / 2.0);
    std::vector<int> deg(n, 0);
    std::vector<std::pair<int, int>> edges;
    for (int attempt = 0; attempt < 40 * (target + 1) && int(edges.size()) < target; ++attempt) {
      int u = uniform(0, n - 1);
      int v = uniform(0, n - 1);
      if (!edges.empty() && coin(0.08)) {
        std::tie(u, v) = edges[uniform(0, int(edges.size()) - 1)];
      } else if (coin(0.05)) {
        v = u;
      } else if (u == v) {
        continue;
      }
      const int need_u = u == v ? 2 : 1;
      if (deg[u] + need_u > cap || (u != v && deg[v] + 1 > cap)) continue;
      deg[u] += need_u;
      if (u != v) deg[v] += 1;
      edges.emplace_back(u, v);
    }
    corpus.push_back({"random" + std::to_string(corpus.size()), make_graph(n, edges)});
  }
  return corpus;
}

std::vector<BipartiteCase> bipartite_corpus(std::size_t count, std::size_t max_side,
                                            std::uint64_t seed) {
  std::vector<BipartiteCase> out;
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  while (out.size() < count) {
    const int k = uniform(1, int(max_side));
    std::vector<int> deg(2 * k, 0);
    std::vector<std::pair<int, int>> edges;
    // Plant a perfect matching most of the time so PERM > 0.
    if (uniform(0, 4) != 0) {
      std::vector<int> perm(k);
      for (int i = 0; i < k; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < k; ++i) {
        edges.emplace_back(i, k + perm[i]);
        ++deg[i];
        ++deg[k + perm[i]];
      }
    }
    const int extra = uniform(0, 2 * k);
    for (int t = 0; t < extra; ++t) {
      const int u = uniform(0, k - 1);
      const int v = k + uniform(0, k - 1);
      if (deg[u] >= 4 || deg[v] >= 4) continue;
      ++deg[u];
      ++deg[v];
      edges.emplace_back(u, v);
    }
    mdlocal::Bipartition sides;
    sides.side.assign(2 * k, 0);
    for (int i = k; i < 2 * k; ++i) sides.side[i] = 1;
    out.push_back({"bip" + std::to_string(out.size()), make_graph(2 * k, edges), sides});
  }
  return out;
}

}  // namespace mdtest
