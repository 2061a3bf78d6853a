#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "mdlocal/estimators.hpp"
#include "mdlocal/graph.hpp"
#include "mdlocal/matching_marginal.hpp"

namespace mdlocal {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kExactVertexCap = 24;
inline constexpr std::size_t kPermanentSideCap = 12;

// Brute-force ground truth for small graphs.
struct ExactStats {
  // m_k(G): matchings with k edges (parallel edges counted separately).
  std::vector<BigInt> matching_counts;
  double z = 1.0;
  double log_z = 0.0;
  // Probability that each vertex is uncovered.
  std::vector<double> marginals;
  double avg_size = 0.0;
  double entropy = 0.0;
  std::size_t max_matching = 0;
};

struct HardcoreExact {
  double z = 1.0;
  double log_z = 0.0;
  // Probability that each vertex is unoccupied.
  std::vector<double> marginals;
};

// Deletion recursion Z(S) = Z(S - v) + sum_e lambda_e Z(S - v - u), memoized
// on the remaining-vertex bitmask. Self-loops never enter a matching.
// Rejects graphs above kExactVertexCap vertices.
ExactStats exact_partition(const Graph& graph, const Activity& activity);

double exact_marginal(const Graph& graph, const Activity& activity, VertexId v);

// Z_I(S) = Z_I(S - v) + lambda Z_I(S - N[v]); self-looped vertices stay empty.
HardcoreExact exact_hardcore(const Graph& graph, double lambda);

// Ryser evaluation of the biadjacency permanent; entry (i, j) counts the
// parallel edges between the i-th left and j-th right vertex.
BigInt exact_permanent(const Graph& graph, const Bipartition& sides);

// Full-tree fixture: y_1 = 1, y_k = 1 / (1 + lambda * branching * y_{k-1}).
double tree_fixture_y(double lambda, std::size_t branching, int k);
// lim y_k = 2 / (1 + sqrt(1 + 4 lambda branching)).
double tree_fixture_limit(double lambda, std::size_t branching);
// f_1 = f_2 = 1, f_k = f_{k-1} + lambda branching f_{k-2}; y_k = f_k / f_{k+1}.
double tree_fixture_f(double lambda, std::size_t branching, int k);
// (alpha^k - beta^k) / (2 alpha - 1) with alpha, beta = (1 +- sqrt(1 + 4 lambda branching)) / 2.
double tree_fixture_f_closed(double lambda, std::size_t branching, int k);

// Full branching-ary tree with `levels` levels (levels = 1 is a single vertex);
// vertex 0 is the root.
Graph full_tree(std::size_t branching, int levels);

}  // namespace mdlocal
