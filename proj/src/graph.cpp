#include "mdlocal/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>

#include "mdlocal/errors.hpp"

namespace mdlocal {

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges,
             std::vector<double> activities)
    : edges_(std::move(edges)), activities_(std::move(activities)) {
  if (num_vertices > std::numeric_limits<VertexId>::max()) {
    throw InputError("too many vertices");
  }
  if (!activities_.empty() && activities_.size() != edges_.size()) {
    throw InputError("activity count does not match edge count");
  }
  std::vector<std::size_t> degree(num_vertices, 0);
  for (const Edge& e : edges_) {
    if (e.u >= num_vertices || e.v >= num_vertices) {
      throw InputError("edge endpoint out of range");
    }
    degree[e.u] += 1;
    degree[e.v] += 1;
    if (e.u == e.v) ++self_loops_;
  }
  max_activity_ = activities_.empty() ? 1.0 : 0.0;
  for (double a : activities_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InputError("edge activities must be positive and finite");
    }
    max_activity_ = std::max(max_activity_, a);
  }

  offsets_.assign(num_vertices + 1, 0);
  for (std::size_t v = 0; v < num_vertices; ++v) {
    offsets_[v + 1] = offsets_[v] + degree[v];
    max_degree_ = std::max(max_degree_, degree[v]);
  }
  half_edges_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    half_edges_[cursor[e.u]++] = {e.v, id};
    half_edges_[cursor[e.v]++] = {e.u, id};
  }
}

bool Graph::has_self_loop(VertexId v) const {
  for (const HalfEdge& h : incident(v)) {
    if (h.vertex == v) return true;
  }
  return false;
}

std::optional<VertexId> Graph::find_original(std::uint64_t id) const {
  if (original_ids_.empty()) {
    if (id < num_vertices()) return static_cast<VertexId>(id);
    return std::nullopt;
  }
  auto it = std::find(original_ids_.begin(), original_ids_.end(), id);
  if (it == original_ids_.end()) return std::nullopt;
  return static_cast<VertexId>(it - original_ids_.begin());
}

void Graph::set_original_ids(std::vector<std::uint64_t> ids) {
  if (!ids.empty() && ids.size() != num_vertices()) {
    throw InputError("original id table size does not match vertex count");
  }
  original_ids_ = std::move(ids);
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.edges_ != b.edges_) return false;
  for (EdgeId e = 0; e < a.num_edges(); ++e) {
    if (a.activity(e) != b.activity(e)) return false;
  }
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    if (a.original_id(v) != b.original_id(v)) return false;
  }
  return true;
}

OracleSession::OracleSession(const Graph& graph, std::optional<std::uint64_t> budget)
    : graph_(&graph), budget_(budget) {}

void OracleSession::require_vertex(VertexId v) const {
  if (v >= graph_->num_vertices()) {
    throw InputError("vertex " + std::to_string(v) + " out of range");
  }
}

void OracleSession::charge() {
  if (budget_ && queries_ >= *budget_) throw BudgetExhausted(*budget_);
  ++queries_;
}

std::size_t OracleSession::degree(VertexId v) {
  require_vertex(v);
  charge();
  return graph_->degree(v);
}

HalfEdge OracleSession::neighbor(VertexId v, std::size_t i) {
  require_vertex(v);
  const auto list = graph_->incident(v);
  if (i < 1 || i > list.size()) {
    throw InputError("neighbor index " + std::to_string(i) + " out of range for vertex " +
                     std::to_string(v));
  }
  charge();
  const HalfEdge h = list[i - 1];
  if (edge_check_) edge_check_(v, h.vertex);
  return h;
}

namespace {

std::uint64_t parse_id(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "expected a non-negative integer vertex id, got '" +
                               std::string(token) + "'");
  }
  return value;
}

double parse_weight(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "expected a decimal edge activity, got '" + std::string(token) + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InputError("line " + std::to_string(line) + ": edge activity must be positive, got " +
                     std::string(token));
  }
  return value;
}

}  // namespace

Graph load_edge_list(std::istream& in, const LoadOptions& options) {
  const std::size_t expected_tokens = options.format == EdgeListFormat::weighted ? 3 : 2;
  std::unordered_map<std::uint64_t, VertexId> dense;
  std::vector<std::uint64_t> original;
  std::vector<Edge> edges;
  std::vector<double> activities;
  // Unmatched directed lines, consumed by their reverse when deduping.
  std::map<std::pair<VertexId, VertexId>, std::size_t> pending;

  auto intern = [&](std::uint64_t id) {
    auto [it, inserted] = dense.try_emplace(id, static_cast<VertexId>(original.size()));
    if (inserted) original.push_back(id);
    return it->second;
  };

  std::string text;
  std::size_t line = 0;
  std::vector<std::string_view> tokens;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view(text);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || view[first] == '#') continue;
    tokens.clear();
    std::size_t pos = first;
    while (pos < view.size()) {
      const auto stop = view.find_first_of(" \t\r", pos);
      const auto len = (stop == std::string_view::npos ? view.size() : stop) - pos;
      tokens.push_back(view.substr(pos, len));
      pos = view.find_first_not_of(" \t\r", pos + len);
      if (pos == std::string_view::npos) break;
    }
    if (tokens.size() != expected_tokens) {
      throw ParseError(line, "expected " + std::to_string(expected_tokens) + " tokens, got " +
                                 std::to_string(tokens.size()));
    }
    const auto a = parse_id(tokens[0], line);
    const auto b = parse_id(tokens[1], line);
    const double weight =
        options.format == EdgeListFormat::weighted ? parse_weight(tokens[2], line) : 1.0;
    const VertexId u = intern(a);
    const VertexId v = intern(b);

    if (options.dedupe_symmetric && u != v) {
      auto reverse = pending.find({v, u});
      if (reverse != pending.end() && reverse->second > 0) {
        --reverse->second;
        continue;
      }
      ++pending[{u, v}];
    }
    edges.push_back({u, v});
    if (options.format == EdgeListFormat::weighted) activities.push_back(weight);
  }

  Graph graph(original.size(), std::move(edges), std::move(activities));
  graph.set_original_ids(std::move(original));
  return graph;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  std::ostringstream buffer;
  buffer << std::setprecision(17);
  const auto& edges = graph.edges();
  for (EdgeId id = 0; id < edges.size(); ++id) {
    buffer << graph.original_id(edges[id].u) << ' ' << graph.original_id(edges[id].v);
    if (graph.has_activities()) buffer << ' ' << graph.activity(id);
    buffer << '\n';
  }
  out << buffer.str();
}

}  // namespace mdlocal
