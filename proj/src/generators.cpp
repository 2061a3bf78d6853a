#include "mdlocal/generators.hpp"

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "mdlocal/errors.hpp"
#include "mdlocal/rng.hpp"

namespace mdlocal {

Graph random_regular_graph(std::size_t n, std::size_t degree, std::uint64_t seed,
                           int max_attempts) {
  if ((n * degree) % 2 != 0) throw InputError("n * degree must be even");
  if (degree >= n && !(n == 0 && degree == 0)) throw InputError("degree must be below n");

  std::vector<VertexId> stubs(n * degree);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<VertexId>(i / degree);
    const std::uint64_t stream = rng::derive(seed, static_cast<std::uint64_t>(attempt));
    // Fisher-Yates with counter-based draws, portable across standard libraries.
    for (std::size_t i = stubs.size(); i > 1; --i) {
      const auto j = rng::to_index(rng::draw(stream, i), i);
      std::swap(stubs[i - 1], stubs[j]);
    }
    edges.clear();
    seen.clear();
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      VertexId a = stubs[i], b = stubs[i + 1];
      if (a == b) { simple = false; break; }
      if (a > b) std::swap(a, b);
      if (!seen.insert((std::uint64_t{a} << 32) | b).second) { simple = false; break; }
      edges.push_back({a, b});
    }
    if (simple) return Graph(n, std::move(edges));
  }
  throw InputError("no simple regular graph found within the attempt limit");
}

}  // namespace mdlocal
