#include "mdlocal/matching_marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mdlocal/errors.hpp"

namespace mdlocal {

Activity Activity::uniform(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("activity must be positive and finite");
  }
  return Activity(lambda, {}, lambda);
}

Activity Activity::per_edge(const Graph& graph, double scale) {
  if (!graph.has_activities()) return uniform(scale);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("activity scale must be positive and finite");
  }
  return Activity(scale, graph.activities(), scale * graph.max_activity());
}

namespace {

class PathTree {
 public:
  PathTree(OracleSession& session, const Activity& activity, const VertexOrder* restriction,
           VertexId root, int depth)
      : session_(session), activity_(activity), restriction_(restriction), root_(root),
        depth_(depth) {
    path_.reserve(static_cast<std::size_t>(depth));
  }

  double evaluate() { return visit(root_, 1); }

 private:
  bool on_path(VertexId t) const {
    return std::find(path_.begin(), path_.end(), t) != path_.end();
  }

  double visit(VertexId s, int level) {
    if (level == depth_) return 1.0;
    path_.push_back(s);
    double sum = 0.0;
    const std::size_t degree = session_.degree(s);
    for (std::size_t i = 1; i <= degree; ++i) {
      const HalfEdge next = session_.neighbor(s, i);
      // Self-loops land here too: s is on the path.
      if (on_path(next.vertex)) continue;
      if (restriction_ && !restriction_->precedes(next.vertex, root_)) continue;
      sum += activity_.of_edge(next.edge) * visit(next.vertex, level + 1);
    }
    path_.pop_back();
    return 1.0 / (1.0 + sum);
  }

  OracleSession& session_;
  const Activity& activity_;
  const VertexOrder* restriction_;
  VertexId root_;
  int depth_;
  std::vector<VertexId> path_;
};

constexpr double kLogResolution = 1e-15;

}  // namespace

double path_tree_value(OracleSession& session, VertexId root, int depth,
                       const Activity& activity, const VertexOrder* restriction) {
  if (depth < 1) throw InputError("path-tree depth must be at least 1");
  if (root >= session.graph().num_vertices()) {
    throw InputError("vertex " + std::to_string(root) + " out of range");
  }
  try {
    return PathTree(session, activity, restriction, root, depth).evaluate();
  } catch (const BudgetExhausted& e) {
    throw BudgetExhausted(e.budget(), depth);
  }
}

MarginalEstimate approx_marginal(OracleSession& session, VertexId root, const Activity& activity,
                                 double epsilon, const VertexOrder* restriction) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (root >= session.graph().num_vertices()) {
    throw InputError("vertex " + std::to_string(root) + " out of range");
  }
  const std::uint64_t start = session.query_count();
  const double threshold = epsilon / std::numbers::e;

  MarginalEstimate out;
  double previous = 1.0;  // depth 1
  double current = 1.0;
  int depth = 1;
  try {
    current = path_tree_value(session, root, 2, activity, restriction);
    depth = 2;
    while (true) {
      const double gap = std::abs(std::log(current) - std::log(previous));
      if (gap <= threshold) break;
      if (gap <= kLogResolution) {
        out.precision_limited = true;
        out.certified = false;
        break;
      }
      const double next = path_tree_value(session, root, depth + 1, activity, restriction);
      previous = current;
      current = next;
      ++depth;
    }
  } catch (const BudgetExhausted&) {
    out.certified = false;
    if (depth == 1) {
      // Nothing beyond the trivial iterate: fall back to the a-priori bracket.
      out.value = 1.0;
      out.lower = 1.0 / (1.0 + activity.max() * static_cast<double>(session.graph().max_degree()));
      out.upper = 1.0;
      out.depth = 1;
      out.log_gap = -std::log(out.lower);
      out.queries = session.query_count() - start;
      return out;
    }
  }
  out.value = current;
  out.lower = std::min(current, previous);
  out.upper = std::max(current, previous);
  out.depth = depth;
  out.log_gap = std::abs(std::log(current) - std::log(previous));
  out.queries = session.query_count() - start;
  return out;
}

int depth_bound(double epsilon, std::size_t max_degree, double lambda) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (max_degree < 1) throw InputError("max degree must be at least 1");
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const double load = lambda * static_cast<double>(max_degree);
  const double rate = 1.0 - 2.0 / (std::sqrt(1.0 + load) + 1.0);
  const double scale = std::log(1.0 + load);
  // Relative slack so the equality case resolves to the boundary depth.
  const double target = epsilon * (1.0 + 1e-12);
  int h = 0;
  while (std::pow(rate, h / 2.0) * scale > target) ++h;
  return h;
}

}  // namespace mdlocal
