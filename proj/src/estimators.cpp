#include "mdlocal/estimators.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "mdlocal/detail/sampling.hpp"
#include "mdlocal/errors.hpp"
#include "mdlocal/rng.hpp"

namespace mdlocal {

std::string_view to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::log_partition: return "log_Z";
    case StatisticKind::avg_matching: return "avg_matching";
    case StatisticKind::entropy: return "entropy";
    case StatisticKind::max_matching: return "max_matching";
    case StatisticKind::log_permanent: return "log_permanent";
    case StatisticKind::log_partition_hardcore: return "log_Z_hardcore";
  }
  return "unknown";
}

SampleSchedule::SampleSchedule(double epsilon, double delta, double value_range,
                               std::uint64_t seed)
    : epsilon_(epsilon), delta_(delta), value_range_(value_range), seed_(seed) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(value_range >= 0.0) || !std::isfinite(value_range)) {
    throw InputError("sample value range must be finite and non-negative");
  }
  const double half = epsilon / 2.0;
  const double count =
      std::ceil(value_range * value_range * std::log(2.0 / delta) / (2.0 * half * half));
  if (count > 1e12) throw InputError("sample count too large; increase epsilon or delta");
  size_ = std::max<std::size_t>(1, static_cast<std::size_t>(count));
}

VertexId SampleSchedule::vertex(std::size_t index, std::size_t num_vertices) const {
  const auto bits = rng::draw(rng::derive(seed_, 1), index);
  return static_cast<VertexId>(rng::to_index(bits, num_vertices));
}

std::uint64_t SampleSchedule::order_seed() const { return rng::derive(seed_, 2); }

std::optional<SampleOutcome> SampleCache::find(std::uint64_t context, VertexId v) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find({context, v});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SampleCache::insert(std::uint64_t context, VertexId v, const SampleOutcome& outcome) {
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign({context, v}, outcome);
}

std::size_t SampleCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_nonempty(const Graph& graph) {
  if (graph.num_vertices() == 0) throw InputError("graph has no vertices");
}

// Restricted samples depend on the vertex order; unrestricted ones do not, so
// they can be shared between runs with different seeds.
std::uint64_t base_context(StatisticKind kind, const Activity& activity, double epsilon,
                           const EstimatorOptions& options, const SampleSchedule* restricted) {
  std::uint64_t digest = detail::mix(0x6d646c6f63616cULL, static_cast<std::uint64_t>(kind));
  digest = detail::mix(digest, activity.max());
  digest = detail::mix(digest, static_cast<std::uint64_t>(activity.is_uniform()));
  digest = detail::mix(digest, epsilon);
  digest = detail::mix(digest, options.per_sample_budget.value_or(0));
  if (restricted != nullptr) digest = detail::mix(digest, restricted->order_seed());
  return digest;
}

void finish_sampled(EstimateResult& result, const detail::SampleTotals& totals,
                    const SampleSchedule& schedule, const EstimatorOptions& options) {
  result.queries = totals.queries;
  result.samples = schedule.size();
  result.delta = options.delta;
  result.confidence = 1.0 - options.delta;
  result.seed = options.seed;
  result.budget_exhausted_samples = totals.uncertified;
  result.certified = totals.uncertified == 0;
  result.mean_sample_error = totals.error_sum / static_cast<double>(schedule.size());
  result.sample_errors = totals.errors;
  if (!result.certified) {
    result.warnings.push_back(std::to_string(totals.uncertified) + " of " +
                              std::to_string(schedule.size()) +
                              " samples stopped before reaching the marginal tolerance; "
                              "the additive bound is not certified");
  }
}

void merge_warnings(EstimateResult& into, const EstimateResult& from) {
  into.warnings.insert(into.warnings.end(), from.warnings.begin(), from.warnings.end());
}

}  // namespace

namespace {

EstimateResult sampled_log_partition(const Graph& graph, const Activity& activity,
                                     double epsilon, const EstimatorOptions& options,
                                     StatisticKind cache_kind,
                                     const OracleSession::EdgeCheck& edge_check) {
  const auto start = Clock::now();
  require_nonempty(graph);
  const double n = static_cast<double>(graph.num_vertices());
  // Each sample -log p lies in [0, log(1 + lambda_max * D)].
  const double range =
      std::log1p(activity.max() * static_cast<double>(graph.max_degree()));
  const SampleSchedule schedule(epsilon, options.delta, range, options.seed);
  const double tolerance = epsilon / 2.0;

  auto totals = detail::run_samples(
      graph, schedule, options, base_context(cache_kind, activity, tolerance, options, &schedule),
      edge_check, [&](OracleSession& session, VertexId v, const VertexOrder& order) {
        const MarginalEstimate m = approx_marginal(session, v, activity, tolerance, &order);
        return SampleOutcome{-std::log(m.value), std::log(m.upper) - std::log(m.lower),
                             m.certified, 0};
      });

  EstimateResult result;
  result.kind = StatisticKind::log_partition;
  result.estimate = n / static_cast<double>(schedule.size()) * totals.sum;
  result.lambda = activity.max();
  result.epsilon = epsilon;
  finish_sampled(result, totals, schedule, options);
  result.additive_bound =
      result.certified ? epsilon * n : n * (epsilon / 2.0 + result.mean_sample_error);
  result.runtime_ms = elapsed_ms(start);
  return result;
}

}  // namespace

EstimateResult estimate_log_partition(const Graph& graph, const Activity& activity,
                                      double epsilon, const EstimatorOptions& options) {
  return sampled_log_partition(graph, activity, epsilon, options, StatisticKind::log_partition,
                               {});
}

EstimateResult estimate_avg_matching_size(const Graph& graph, const Activity& activity,
                                          double epsilon, const EstimatorOptions& options) {
  const auto start = Clock::now();
  require_nonempty(graph);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const double n = static_cast<double>(graph.num_vertices());
  // Samples enter with coefficient 1/2, so their spread is at most 1/2.
  const SampleSchedule schedule(epsilon, options.delta, 0.5, options.seed);

  auto totals = detail::run_samples(
      graph, schedule, options,
      base_context(StatisticKind::avg_matching, activity, epsilon, options, nullptr), {},
      [&](OracleSession& session, VertexId v, const VertexOrder&) {
        const MarginalEstimate m = approx_marginal(session, v, activity, epsilon);
        return SampleOutcome{m.value, m.upper - m.lower, m.certified, 0};
      });

  EstimateResult result;
  result.kind = StatisticKind::avg_matching;
  result.estimate = n / 2.0 - n / (2.0 * static_cast<double>(schedule.size())) * totals.sum;
  result.lambda = activity.max();
  result.epsilon = epsilon;
  finish_sampled(result, totals, schedule, options);
  result.additive_bound =
      result.certified ? epsilon * n : n * (epsilon / 2.0 + result.mean_sample_error / 2.0);
  result.runtime_ms = elapsed_ms(start);
  return result;
}

EstimateResult estimate_entropy(const Graph& graph, double lambda, double epsilon,
                                const EstimatorOptions& options) {
  const auto start = Clock::now();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const Activity activity = Activity::uniform(lambda);
  const double log_lambda = std::log(lambda);

  // Each half runs at delta/2 so the union bound keeps 1 - delta overall.
  EstimatorOptions part = options;
  part.delta = options.delta / 2.0;
  part.seed = rng::derive(options.seed, 11);
  const EstimateResult z = estimate_log_partition(graph, activity, epsilon / 2.0, part);
  part.seed = rng::derive(options.seed, 12);
  const EstimateResult e = estimate_avg_matching_size(
      graph, activity, epsilon / (2.0 * std::max(std::abs(log_lambda), 1.0)), part);

  EstimateResult result;
  result.kind = StatisticKind::entropy;
  result.estimate = z.estimate - log_lambda * e.estimate;
  result.confidence = 1.0 - options.delta;
  result.certified = z.certified && e.certified;
  // The two tolerances are split so a certified pair stays within epsilon * n.
  result.additive_bound =
      result.certified ? epsilon * static_cast<double>(graph.num_vertices())
                       : z.additive_bound + std::abs(log_lambda) * e.additive_bound;
  result.queries = z.queries + e.queries;
  result.samples = z.samples + e.samples;
  result.lambda = lambda;
  result.epsilon = epsilon;
  result.delta = options.delta;
  result.seed = options.seed;
  result.budget_exhausted_samples = z.budget_exhausted_samples + e.budget_exhausted_samples;
  result.mean_sample_error =
      (z.mean_sample_error * static_cast<double>(z.samples) +
       e.mean_sample_error * static_cast<double>(e.samples)) /
      static_cast<double>(result.samples);
  result.sample_errors = z.sample_errors;
  result.sample_errors.insert(result.sample_errors.end(), e.sample_errors.begin(),
                              e.sample_errors.end());
  merge_warnings(result, z);
  merge_warnings(result, e);
  result.runtime_ms = elapsed_ms(start);
  return result;
}

double max_matching_activity(std::size_t max_degree, double epsilon) {
  const double exponent = static_cast<double>(max_degree) / epsilon;
  if (exponent > 1000.0) {
    throw InputError("activity 2^(D/epsilon) overflows; use a larger epsilon");
  }
  return std::exp2(exponent);
}

EstimateResult estimate_max_matching(const Graph& graph, double epsilon,
                                     const EstimatorOptions& options) {
  const auto start = Clock::now();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  require_nonempty(graph);
  // exp(D log 2 / (2 * epsilon/2)): the size bias E <= OPT <= E + m log 2 / log lambda
  // is then at most epsilon * n / 2.
  const double lambda = max_matching_activity(graph.max_degree(), epsilon);
  EstimateResult result =
      estimate_avg_matching_size(graph, Activity::uniform(lambda), epsilon / 2.0, options);
  result.kind = StatisticKind::max_matching;
  result.epsilon = epsilon;
  result.additive_bound += epsilon * static_cast<double>(graph.num_vertices()) / 2.0;
  result.warnings.insert(result.warnings.begin(),
                         "query cost grows doubly exponentially in max_degree/epsilon");
  result.runtime_ms = elapsed_ms(start);
  return result;
}

void Bipartition::validate(const Graph& graph) const {
  if (side.size() != graph.num_vertices()) {
    throw InputError("bipartition must assign a side to every vertex");
  }
  std::size_t left = 0;
  for (auto s : side) {
    if (s > 1) throw InputError("bipartition sides must be 0 or 1");
    left += s == 0 ? 1 : 0;
  }
  if (2 * left != side.size()) throw InputError("bipartition sides must have equal size");
}

Bipartition load_bipartition(std::istream& in, const Graph& graph) {
  std::unordered_map<std::uint64_t, VertexId> dense;
  for (VertexId v = 0; v < graph.num_vertices(); ++v) dense.emplace(graph.original_id(v), v);

  constexpr std::uint8_t unset = 2;
  Bipartition result{std::vector<std::uint8_t>(graph.num_vertices(), unset)};
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    std::istringstream fields(text);
    std::string id_token, side_token, extra;
    fields >> id_token >> side_token;
    if (side_token.empty() || (fields >> extra)) {
      throw ParseError(line, "expected '<vertex> <side>'");
    }
    std::uint64_t id = 0;
    auto [p, ec] = std::from_chars(id_token.data(), id_token.data() + id_token.size(), id);
    if (ec != std::errc() || p != id_token.data() + id_token.size()) {
      throw ParseError(line, "bad vertex id '" + id_token + "'");
    }
    if (side_token != "0" && side_token != "1") {
      throw ParseError(line, "side must be 0 or 1, got '" + side_token + "'");
    }
    auto it = dense.find(id);
    if (it == dense.end()) throw ParseError(line, "vertex " + id_token + " is not in the graph");
    if (result.side[it->second] != unset) {
      throw ParseError(line, "vertex " + id_token + " listed twice");
    }
    result.side[it->second] = side_token == "1" ? 1 : 0;
  }
  for (auto s : result.side) {
    if (s == unset) throw InputError("bipartition does not cover every vertex");
  }
  result.validate(graph);
  return result;
}

double permanent_activity(std::size_t max_degree, double epsilon, double alpha) {
  if (!(alpha > 0.0)) throw InputError("expansion parameter alpha must be positive");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const double log_degree = max_degree > 1 ? std::log(static_cast<double>(max_degree)) : 0.0;
  return std::max(1.0, 2.0 * log_degree / (epsilon * std::log1p(alpha)));
}

EstimateResult estimate_log_permanent(const Graph& graph, const Bipartition& sides,
                                      double epsilon, double alpha,
                                      const EstimatorOptions& options,
                                      std::optional<double> activity_override) {
  const auto start = Clock::now();
  require_nonempty(graph);
  sides.validate(graph);
  const double lambda = activity_override ? *activity_override
                                          : permanent_activity(graph.max_degree(), epsilon, alpha);
  const auto& side = sides.side;
  auto check = [&side](VertexId from, VertexId to) {
    if (side[from] == side[to]) {
      throw InputError("edge " + std::to_string(from) + "-" + std::to_string(to) +
                       " joins two vertices on the same side of the bipartition");
    }
  };
  EstimateResult result = sampled_log_partition(graph, Activity::uniform(lambda), epsilon / 2.0,
                                                options, StatisticKind::log_permanent, check);
  const double n = static_cast<double>(graph.num_vertices());
  result.kind = StatisticKind::log_permanent;
  result.estimate -= (n / 2.0) * std::log(lambda);
  result.lambda = lambda;
  result.epsilon = epsilon;
  // Activity gap of the permanent reduction is at most epsilon * n / 2.
  result.additive_bound += epsilon * n / 2.0;
  result.warnings.push_back(
      "one-sided: log PERM <= estimate + bound, and a graph without a perfect matching is "
      "not detected");
  result.runtime_ms = elapsed_ms(start);
  return result;
}

}  // namespace mdlocal
