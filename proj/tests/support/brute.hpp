#pragma once

#include <cstdint>
#include <vector>

#include "mdlocal/graph.hpp"

// Enumeration-based reference values, written without the library's
// deletion recursions so the two can cross-check each other.
namespace mdtest::brute {

struct MatchingSummary {
  std::vector<double> counts_by_size;  // unweighted m_k
  double z = 0.0;
  std::vector<double> uncovered;       // p(v uncovered)
  double avg_size = 0.0;
  double entropy = 0.0;
  std::size_t max_matching = 0;
};

// Walks every matching (every subset of non-loop edges with disjoint ends).
// `lambda` scales per-edge activities when the graph has them.
MatchingSummary matchings(const mdlocal::Graph& g, double lambda);

struct IndependentSummary {
  double z = 0.0;
  std::vector<double> unoccupied;
};

// All 2^n vertex subsets; self-looped vertices may not be occupied.
IndependentSummary independent_sets(const mdlocal::Graph& g, double lambda);

// Sum over all k! bijections left -> right of the product of edge multiplicities.
double permanent(const mdlocal::Graph& g, const std::vector<std::uint8_t>& side);

}  // namespace mdtest::brute
