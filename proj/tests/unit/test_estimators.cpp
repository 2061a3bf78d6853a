#include <cmath>
#include <numeric>
#include <sstream>

#include "brute.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "mdlocal/errors.hpp"
#include "mdlocal/estimators.hpp"
#include "mdlocal/exact_oracle.hpp"
#include "mdlocal/matching_marginal.hpp"

using namespace mdlocal;
using mdtest::make_graph;

namespace {

EstimatorOptions seeded(std::uint64_t seed) {
  EstimatorOptions o;
  o.seed = seed;
  return o;
}

Graph disjoint_edges(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k; ++i) e.emplace_back(2 * i, 2 * i + 1);
  return make_graph(2 * k, e);
}

void check_same(const EstimateResult& a, const EstimateResult& b) {
  CHECK(a.estimate == b.estimate);
  CHECK(a.additive_bound == b.additive_bound);
  CHECK(a.certified == b.certified);
  CHECK(a.queries == b.queries);
  CHECK(a.samples == b.samples);
  CHECK(a.mean_sample_error == b.mean_sample_error);
  CHECK(a.budget_exhausted_samples == b.budget_exhausted_samples);
  CHECK(a.sample_errors == b.sample_errors);
  CHECK(a.warnings == b.warnings);
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("sample schedule") {
    CHECK(SampleSchedule(0.1, 0.1, std::log(4.0), 0).size() == 1152);
    CHECK(SampleSchedule(0.1, 0.1, std::log(5.0), 0).size() == 1552);
    CHECK(SampleSchedule(0.1, 0.1, 0.0, 0).size() == 1);
    CHECK(SampleSchedule(0.5, 0.5, 0.5, 0).size() ==
          std::size_t(std::ceil(0.25 * std::log(4.0) / (2 * 0.0625))));
    CHECK_THROWS_AS(SampleSchedule(0.0, 0.1, 1.0, 0), InputError);
    CHECK_THROWS_AS(SampleSchedule(0.1, 1.0, 1.0, 0), InputError);

    const SampleSchedule a(0.1, 0.1, 1.0, 9), b(0.1, 0.1, 1.0, 9), c(0.1, 0.1, 1.0, 10);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.vertex(i, 1000) == b.vertex(i, 1000));
      CHECK(a.vertex(i, 1000) < 1000);
      differ += a.vertex(i, 1000) != c.vertex(i, 1000);
    }
    CHECK(differ > a.size() / 2);
    CHECK(a.order_seed() == b.order_seed());
    CHECK(a.order_seed() != c.order_seed());

    // Every vertex of a small graph is hit about equally often.
    const SampleSchedule big(0.01, 0.01, 1.0, 3);
    std::vector<double> hits(7, 0.0);
    for (std::size_t i = 0; i < big.size(); ++i) hits[big.vertex(i, 7)] += 1.0;
    for (double h : hits) CHECK(std::abs(h / double(big.size()) - 1.0 / 7.0) < 0.01);
  }

  TEST_CASE("sample count does not see the graph") {
    std::vector<std::size_t> sizes;
    for (int n : {2, 20, 2000}) {
      const auto r = estimate_avg_matching_size(disjoint_edges(n / 2), Activity::uniform(1.0), 0.2,
                                                seeded(1));
      sizes.push_back(r.samples);
    }
    CHECK(sizes[0] == sizes[1]);
    CHECK(sizes[1] == sizes[2]);
  }

  TEST_CASE("log partition fixtures") {
    const auto empty = estimate_log_partition(make_graph(5, {}), Activity::uniform(3.0), 0.1);
    CHECK(empty.estimate == 0.0);
    CHECK(empty.kind == StatisticKind::log_partition);
    CHECK(empty.additive_bound == doctest::Approx(0.5));

    const auto five = estimate_log_partition(disjoint_edges(5), Activity::uniform(1.0), 0.05, seeded(3));
    CHECK(std::abs(five.estimate - 5.0 * std::log(2.0)) <= 0.5);
    CHECK(five.certified);
    CHECK(five.confidence == doctest::Approx(0.9));

    const Graph c3 = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    const auto r = estimate_log_partition(c3, Activity::uniform(1.0), 0.1, seeded(7));
    CHECK(std::abs(r.estimate - std::log(4.0)) <= 0.3);
    CHECK_THROWS_AS(estimate_log_partition(Graph(0, {}), Activity::uniform(1.0), 0.1), InputError);
    CHECK_THROWS_AS(estimate_log_partition(c3, Activity::uniform(1.0), 1.5), InputError);
  }

  TEST_CASE("average size fixtures") {
    CHECK(estimate_avg_matching_size(make_graph(4, {}), Activity::uniform(1.0), 0.1).estimate == 0.0);
    const auto k2 = estimate_avg_matching_size(make_graph(2, {{0, 1}}), Activity::uniform(1.0), 0.1);
    CHECK(k2.estimate == doctest::Approx(0.5));
    const auto p3 = estimate_avg_matching_size(make_graph(3, {{0, 1}, {1, 2}}),
                                               Activity::uniform(1.0), 0.05, seeded(2));
    CHECK(std::abs(p3.estimate - 2.0 / 3.0) <= 0.15);
    CHECK(p3.kind == StatisticKind::avg_matching);
  }

  TEST_CASE("entropy fixtures") {
    const Graph k2 = make_graph(2, {{0, 1}});
    const auto one = estimate_entropy(k2, 1.0, 0.1, seeded(5));
    CHECK(std::abs(one.estimate - std::log(2.0)) <= 0.2);
    CHECK(one.additive_bound == doctest::Approx(0.2));
    CHECK(estimate_entropy(make_graph(3, {}), 1.0, 0.1).estimate == 0.0);
    const auto two = estimate_entropy(k2, 2.0, 0.1, seeded(5));
    CHECK(std::abs(two.estimate - 0.636514168294813) <= 0.2);
    CHECK(two.kind == StatisticKind::entropy);
    CHECK(two.samples > 0);
  }

  TEST_CASE("maximum matching") {
    CHECK(max_matching_activity(3, 1.0) == 8.0);
    CHECK(max_matching_activity(4, 0.5) == 256.0);
    CHECK_THROWS_AS(max_matching_activity(4, 0.001), InputError);

    const auto five = estimate_max_matching(disjoint_edges(5), 0.2, seeded(1));
    CHECK(std::abs(five.estimate - 5.0) <= 2.0);
    CHECK(five.lambda == doctest::Approx(32.0));
    CHECK_FALSE(five.warnings.empty());
    const auto star = estimate_max_matching(make_graph(4, {{0, 1}, {0, 2}, {0, 3}}), 0.2, seeded(1));
    CHECK(std::abs(star.estimate - 1.0) <= 0.8);
    CHECK(star.kind == StatisticKind::max_matching);
  }

  TEST_CASE("bipartition input") {
    const Graph g = make_graph(4, {{0, 2}, {1, 3}});
    std::istringstream ok("# sides\n0 0\n1 0\n2 1\n3 1\n");
    CHECK(load_bipartition(ok, g).side == std::vector<std::uint8_t>{0, 0, 1, 1});
    std::istringstream bad_side("0 0\n1 0\n2 2\n3 1\n");
    CHECK_THROWS_AS(load_bipartition(bad_side, g), ParseError);
    std::istringstream missing("0 0\n1 0\n2 1\n");
    CHECK_THROWS_AS(load_bipartition(missing, g), InputError);
    std::istringstream unbalanced("0 0\n1 0\n2 0\n3 1\n");
    CHECK_THROWS_AS(load_bipartition(unbalanced, g), InputError);
    std::istringstream twice("0 0\n0 1\n");
    CHECK_THROWS_AS(load_bipartition(twice, g), ParseError);
  }

  TEST_CASE("permanent") {
    CHECK(permanent_activity(4, 0.1, 1.0) == doctest::Approx(2.0 * std::log(4.0) / (0.1 * std::log(2.0))));
    CHECK(permanent_activity(1, 0.1, 1.0) == 1.0);
    CHECK_THROWS_AS(permanent_activity(3, 0.1, 0.0), InputError);

    // 2K2 at lambda = 4: Z = 25, so log Z - 2 log 4 = log(25/16) >= log PERM = 0.
    const Graph g = make_graph(4, {{0, 2}, {1, 3}});
    const Bipartition sides{{0, 0, 1, 1}};
    const auto r = estimate_log_permanent(g, sides, 0.2, 1.0, seeded(3), 4.0);
    CHECK(r.lambda == 4.0);
    CHECK(r.kind == StatisticKind::log_permanent);
    CHECK(std::abs(r.estimate - std::log(25.0 / 16.0)) <= 0.2 * 4);
    CHECK(r.estimate >= -0.2 * 4 / 2);

    const Graph odd = make_graph(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(estimate_log_permanent(odd, sides, 0.2, 1.0, seeded(3), 4.0), InputError);
  }

  TEST_CASE("components add up") {
    const Graph a = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    const Graph b = make_graph(4, {{0, 1}, {0, 1}, {1, 2}, {2, 3}, {3, 3}});
    std::vector<std::pair<int, int>> joined = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                                               {5, 6}, {5, 6}, {6, 7}, {7, 8}, {8, 8}};
    const Graph ab = make_graph(9, joined);
    const Activity one = Activity::uniform(1.0);
    const auto ea = exact_partition(a, one), eb = exact_partition(b, one), eab = exact_partition(ab, one);
    CHECK(eab.log_z == doctest::Approx(ea.log_z + eb.log_z).epsilon(1e-12));
    CHECK(eab.avg_size == doctest::Approx(ea.avg_size + eb.avg_size).epsilon(1e-12));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto ra = estimate_log_partition(a, one, 0.1, seeded(seed));
      const auto rb = estimate_log_partition(b, one, 0.1, seeded(seed + 100));
      CHECK(std::abs(ra.estimate + rb.estimate - eab.log_z) <= ra.additive_bound + rb.additive_bound);
      const auto whole = estimate_log_partition(ab, one, 0.1, seeded(seed));
      CHECK(std::abs(whole.estimate - eab.log_z) <= whole.additive_bound);
    }
  }

  TEST_CASE("thread count and caching do not change results") {
    const auto corpus = mdtest::small_corpus(30);
    for (const auto& [name, g] : corpus) {
      if (g.num_vertices() == 0) continue;
      CAPTURE(name);
      EstimatorOptions one = seeded(17), many = seeded(17);
      many.threads = 8;
      one.keep_sample_errors = many.keep_sample_errors = true;
      check_same(estimate_log_partition(g, Activity::uniform(1.0), 0.2, one),
                 estimate_log_partition(g, Activity::uniform(1.0), 0.2, many));
      check_same(estimate_entropy(g, 2.0, 0.3, one), estimate_entropy(g, 2.0, 0.3, many));

      SampleCache cache;
      EstimatorOptions cached = one;
      cached.cache = &cache;
      const auto plain = estimate_avg_matching_size(g, Activity::uniform(0.5), 0.2, one);
      const auto first = estimate_avg_matching_size(g, Activity::uniform(0.5), 0.2, cached);
      const auto second = estimate_avg_matching_size(g, Activity::uniform(0.5), 0.2, cached);
      CHECK(first.estimate == plain.estimate);
      CHECK(second.estimate == plain.estimate);
      CHECK(first.queries <= plain.queries);
      CHECK(second.queries == 0);
      EstimatorOptions other = cached;
      other.seed = 18;
      // Vertices already seen under seed 17 come from the cache.
      const auto reseeded = estimate_avg_matching_size(g, Activity::uniform(0.5), 0.2, other);
      const auto fresh = estimate_avg_matching_size(g, Activity::uniform(0.5), 0.2, seeded(18));
      CHECK(reseeded.estimate == fresh.estimate);
      CHECK(reseeded.queries <= fresh.queries);
    }
  }

  TEST_CASE("reported queries are the sum over samples") {
    const Graph g = mdtest::small_corpus(30)[20].graph;
    const Activity act = Activity::uniform(1.0);
    const auto r = estimate_log_partition(g, act, 0.3, seeded(8));
    const SampleSchedule schedule(0.3, 0.1, std::log1p(double(g.max_degree())), 8);
    const VertexOrder order(schedule.order_seed());
    std::uint64_t total = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      OracleSession s(g);
      const auto m = approx_marginal(s, schedule.vertex(i, g.num_vertices()), act, 0.15, &order);
      total += s.query_count();
      sum += -std::log(m.value);
    }
    CHECK(r.samples == schedule.size());
    CHECK(r.queries == total);
    CHECK(r.estimate == doctest::Approx(double(g.num_vertices()) / double(schedule.size()) * sum));
  }

  TEST_CASE("budgeted runs are flagged") {
    const Graph g = full_tree(3, 7);
    EstimatorOptions o = seeded(2);
    o.per_sample_budget = 40;
    o.keep_sample_errors = true;
    const auto r = estimate_avg_matching_size(g, Activity::uniform(1.0), 0.05, o);
    CHECK_FALSE(r.certified);
    CHECK(r.budget_exhausted_samples > 0);
    REQUIRE(r.sample_errors.size() == r.samples);
    const double mean = std::accumulate(r.sample_errors.begin(), r.sample_errors.end(), 0.0) /
                        double(r.samples);
    CHECK(r.mean_sample_error == doctest::Approx(mean));
    CHECK(r.queries <= 40 * r.samples);
    CHECK(r.additive_bound > 0.0);
    CHECK_FALSE(r.warnings.empty());

    const auto lz = estimate_log_partition(g, Activity::uniform(1.0), 0.1, o);
    CHECK_FALSE(lz.certified);
    const double n = double(g.num_vertices());
    CHECK(lz.additive_bound == doctest::Approx(n * (0.05 + lz.mean_sample_error)));

    o.per_sample_budget = std::nullopt;
    CHECK(estimate_avg_matching_size(g, Activity::uniform(1.0), 0.05, o).certified);
  }

  TEST_CASE("small statistical check") {
    for (const auto& [name, g] : mdtest::small_corpus(20)) {
      if (g.num_vertices() == 0) continue;
      const double n = double(g.num_vertices());
      const auto truth = exact_partition(g, Activity::uniform(1.0));
      SampleCache za, ea;
      int ok_z = 0, ok_e = 0;
      for (std::uint64_t seed = 0; seed < 40; ++seed) {
        EstimatorOptions o = seeded(seed);
        o.cache = &za;
        ok_z += std::abs(estimate_log_partition(g, Activity::uniform(1.0), 0.1, o).estimate -
                         truth.log_z) <= 0.1 * n;
        o.cache = &ea;
        ok_e += std::abs(estimate_avg_matching_size(g, Activity::uniform(1.0), 0.1, o).estimate -
                         truth.avg_size) <= 0.1 * n;
      }
      CAPTURE(name);
      CHECK(ok_z >= 34);
      CHECK(ok_e >= 34);
    }
  }
}
