#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mdlocal {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// One entry of a vertex's adjacency list.
struct HalfEdge {
  VertexId vertex;
  EdgeId edge;

  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

/// Immutable undirected multigraph in compressed adjacency form.
///
/// Each vertex lists its incident half-edges in edge-id (ingestion) order.
/// Parallel edges appear once per copy; a self-loop appears twice in its
/// endpoint's list under the same edge id, so it counts 2 toward the stored
/// degree. Optional per-edge activities must all be positive.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t num_vertices, std::vector<Edge> edges,
        std::vector<double> activities = {});

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }
  std::size_t self_loop_count() const { return self_loops_; }

  // Direct storage access; not charged as oracle queries.
  std::span<const HalfEdge> incident(VertexId v) const {
    return {half_edges_.data() + offsets_[v], half_edges_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_self_loop(VertexId v) const;

  const std::vector<Edge>& edges() const { return edges_; }
  bool has_activities() const { return !activities_.empty(); }
  std::span<const double> activities() const { return activities_; }
  double activity(EdgeId e) const { return activities_.empty() ? 1.0 : activities_[e]; }
  double max_activity() const { return max_activity_; }

  // Ids as they appeared in the source file. Identity when built in code.
  std::uint64_t original_id(VertexId v) const {
    return original_ids_.empty() ? v : original_ids_[v];
  }
  std::optional<VertexId> find_original(std::uint64_t id) const;
  void set_original_ids(std::vector<std::uint64_t> ids);

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<Edge> edges_;
  std::vector<double> activities_;
  std::vector<std::size_t> offsets_{0};
  std::vector<HalfEdge> half_edges_;
  std::vector<std::uint64_t> original_ids_;
  std::size_t max_degree_ = 0;
  std::size_t self_loops_ = 0;
  double max_activity_ = 1.0;
};

/// Degree/neighbor oracle over a Graph with query accounting.
///
/// Every successful degree() or neighbor() call costs exactly one query.
/// With a budget set, the call that would exceed it throws BudgetExhausted
/// and is not charged. Invalid arguments throw InputError and are not charged.
class OracleSession {
 public:
  using EdgeCheck = std::function<void(VertexId from, VertexId to)>;

  explicit OracleSession(const Graph& graph,
                         std::optional<std::uint64_t> budget = std::nullopt);

  std::size_t degree(VertexId v);
  // i is 1-based, 1 <= i <= degree(v).
  HalfEdge neighbor(VertexId v, std::size_t i);

  std::uint64_t query_count() const { return queries_; }
  std::optional<std::uint64_t> budget() const { return budget_; }
  const Graph& graph() const { return *graph_; }

  // Called on every neighbor() result; may throw to reject an edge.
  void set_edge_check(EdgeCheck check) { edge_check_ = std::move(check); }

 private:
  void charge();
  void require_vertex(VertexId v) const;

  const Graph* graph_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t queries_ = 0;
  EdgeCheck edge_check_;
};

enum class EdgeListFormat { plain, weighted };

struct LoadOptions {
  EdgeListFormat format = EdgeListFormat::plain;
  // Collapse a directed listing's (u,v)/(v,u) pairs into one undirected edge.
  bool dedupe_symmetric = false;
};

// Reads a SNAP-style edge list. Vertex ids are remapped densely in order of
// first appearance; the originals are kept on the graph.
Graph load_edge_list(std::istream& in, const LoadOptions& options = {});

// Writes edges in edge-id order using original ids; weighted when the graph
// carries activities. Isolated vertices are not representable.
void write_edge_list(std::ostream& out, const Graph& graph);

}  // namespace mdlocal
