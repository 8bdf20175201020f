#include <doctest.h>

#include "oracles.hpp"

using namespace graphimpute;

namespace {

FeatureSet one_modality(std::size_t rows, std::size_t cols, std::vector<double> values,
                        std::vector<std::uint8_t> missing) {
  FeatureSet f;
  f.modalities.push_back(make_modality("m", FeatureMatrix(rows, cols, std::move(values)), std::move(missing)));
  return f;
}

ItemGraph graph(std::size_t n, std::vector<std::pair<Index, Index>> edges) {
  return binary_graph_from_edges(n, edges);
}

std::vector<double> row(const FeatureSet& f, std::size_t i) {
  const auto r = f.modalities[0].values.row(i);
  return {r.begin(), r.end()};
}

}  // namespace

TEST_CASE("impute_zeros") {
  const auto f = one_modality(2, 3, {1, 2, 3, 4, 5, 6}, {0, 1});
  const auto out = impute_zeros(f);
  CHECK(row(out, 1) == std::vector<double>{0, 0, 0});
  CHECK(row(out, 0) == std::vector<double>{1, 2, 3});
  CHECK(out.modalities[0].missing_count() == 0);
  CHECK(out.modalities[0].imputed == std::vector<std::uint8_t>{0, 1});

  const auto full = one_modality(2, 1, {7, 8}, {});
  CHECK(impute_zeros(full) == full);

  const auto five = one_modality(5, 1, {1, 2, 3, 4, 5}, {1, 0, 1, 0, 0});
  const auto z = impute_zeros(five);
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < 5; ++i) replaced += z.modalities[0].values.at(i, 0) != five.modalities[0].values.at(i, 0) || five.modalities[0].is_missing(i);
  CHECK(replaced == 2);
}

TEST_CASE("impute_random is seeded, bounded and touches masked rows only") {
  oracle::Rng rng(1);
  const auto f = oracle::random_features(rng, 40, {8, 3}, 0.4);
  const auto a = impute_random(f, 42);
  const auto b = impute_random(f, 42);
  const auto c = impute_random(f, 43);
  CHECK(a == b);
  bool differs = false;
  for (std::size_t m = 0; m < f.modalities.size(); ++m) {
    const auto& in = f.modalities[m];
    for (std::size_t i = 0; i < 40; ++i) {
      const auto ra = a.modalities[m].values.row(i);
      if (!in.is_missing(i)) {
        CHECK(oracle::same_bits(ra, in.values.row(i)));
        CHECK(oracle::same_bits(ra, c.modalities[m].values.row(i)));
        continue;
      }
      for (double v : ra) CHECK((v >= 0.0 && v < 1.0));
      differs |= !oracle::same_bits(ra, c.modalities[m].values.row(i));
    }
  }
  CHECK(differs);
}

TEST_CASE("impute_global_mean") {
  CHECK(row(impute_global_mean(one_modality(3, 2, {0, 2, 2, 4, 0, 0}, {0, 0, 1})), 2) ==
        std::vector<double>{1, 3});
  CHECK(row(impute_global_mean(one_modality(2, 2, {5, -1, 0, 0}, {0, 1})), 1) ==
        std::vector<double>{5, -1});

  // Arithmetic-mean oracle.
  const std::vector<double> known{1, 2, 6};
  const double want = (known[0] + known[1] + known[2]) / 3.0;
  CHECK(want == 3.0);
  CHECK(row(impute_global_mean(one_modality(4, 1, {1, 2, 6, 0}, {0, 0, 0, 1})), 3) ==
        std::vector<double>{want});

  try {
    impute_global_mean(one_modality(2, 1, {0, 0}, {1, 1}));
    FAIL("expected NoObservedFeatures");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoObservedFeatures);
  }
}

TEST_CASE("impute_neigh_mean") {
  SUBCASE("two-neighbor mean") {
    const auto f = one_modality(3, 2, {1, 3, 3, 5, 0, 0}, {0, 0, 1});
    const auto out = impute_neigh_mean(f, graph(3, {{2, 0}, {2, 1}}), ColdFallback::Zeros);
    CHECK(row(out, 2) == std::vector<double>{2, 4});
  }
  SUBCASE("masked sole neighbor contributes its zero placeholder") {
    const auto f = one_modality(3, 1, {9, 0, 0}, {0, 1, 1});
    const auto out = impute_neigh_mean(f, graph(3, {{1, 2}}), ColdFallback::GlobalMean);
    CHECK(row(out, 1) == std::vector<double>{0});
    CHECK(row(out, 2) == std::vector<double>{0});
  }
  SUBCASE("isolated item takes the global mean fallback") {
    const auto f = one_modality(3, 1, {2, 4, 0}, {0, 0, 1});
    const auto out = impute_neigh_mean(f, graph(3, {{0, 1}}), ColdFallback::GlobalMean);
    CHECK(row(out, 2) == std::vector<double>{3});
    const auto zeros = impute_neigh_mean(f, graph(3, {{0, 1}}), ColdFallback::Zeros);
    CHECK(row(zeros, 2) == std::vector<double>{0});
  }
  SUBCASE("observed-only policy skips masked neighbors") {
    const auto f = one_modality(3, 1, {6, 0, 0}, {0, 1, 1});
    const auto g = graph(3, {{0, 2}, {1, 2}});
    CHECK(row(impute_neigh_mean(f, g, ColdFallback::Zeros), 2) == std::vector<double>{3});
    CHECK(row(impute_neigh_mean(f, g, ColdFallback::Zeros, NeighborPolicy::ObservedOnly), 2) ==
          std::vector<double>{6});
  }
}

TEST_CASE("NeighMean matches the naive neighbor loop") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = oracle::uniform(rng, 1, 30);
    const auto g = oracle::random_graph(rng, n, 0.15, false);
    // Integer features make every summation order exact.
    const auto f = oracle::random_features(rng, n, {3}, 0.4, true);
    const bool mean_fallback = trial % 2 == 0;
    const auto out = impute_neigh_mean(f, g, mean_fallback ? ColdFallback::GlobalMean : ColdFallback::Zeros);
    REQUIRE(out.modalities[0].values == oracle::naive_neigh_mean(f.modalities[0], g, mean_fallback));
  }
}

TEST_CASE("impute_multihop hand-computed cases") {
  const auto edge = graph(2, {{0, 1}});
  CHECK(row(impute_multihop(one_modality(2, 1, {1, 0}, {0, 1}), sym_norm_adjacency(edge), 1,
                            ColdFallback::Zeros),
            1) == std::vector<double>{1});

  const auto path = sym_norm_adjacency(graph(3, {{0, 1}, {1, 2}}));
  const auto f = one_modality(3, 1, {1, 0, 3}, {0, 1, 0});
  const double want = (1.0 + 3.0) / (std::sqrt(2.0) * std::sqrt(1.0));
  CHECK(std::abs(want - 2.8284271247461903) < 1e-15);
  for (std::size_t hops : {1, 2, 5}) {
    const auto out = impute_multihop(f, path, hops, ColdFallback::Zeros);
    CHECK(std::abs(out.modalities[0].values.at(1, 0) - want) < 1e-12);
    CHECK(out.modalities[0].values.at(0, 0) == 1.0);
    CHECK(out.modalities[0].values.at(2, 0) == 3.0);
  }
  CHECK_THROWS_AS(impute_multihop(f, path, 0, ColdFallback::Zeros), Error);
}

TEST_CASE("impute_multihop reads only the previous iterate") {
  // Chain a - b - c with only a known: b gets a's value at hop 1, c at hop 2.
  const auto op = sym_norm_adjacency(graph(3, {{0, 1}, {1, 2}}));
  const auto f = one_modality(3, 1, {1, 0, 0}, {0, 1, 1});
  const auto one = impute_multihop(f, op, 1, ColdFallback::Zeros);
  CHECK(one.modalities[0].values.at(2, 0) == 0.0);
  const auto two = impute_multihop(f, op, 2, ColdFallback::Zeros);
  CHECK(two.modalities[0].values.at(2, 0) > 0.0);
}

TEST_CASE("impute_pers_pagerank closed forms") {
  const auto edge = graph(2, {{0, 1}});
  const auto f = one_modality(2, 1, {1, 0}, {0, 1});
  PprOptions opts;
  opts.alpha = 0.9;
  opts.hops = 1;

  opts.mode = PprMode::Exact;
  const auto exact = impute_pers_pagerank(f, edge, opts);
  CHECK(std::abs(exact.modalities[0].values.at(1, 0) - 0.1125) < 1e-12);

  opts.mode = PprMode::Iterative;
  DiffusionTrace trace;
  const auto iter = impute_pers_pagerank(f, edge, opts, &trace);
  CHECK(std::abs(iter.modalities[0].values.at(1, 0) - 0.1125) < 1e-6);
  REQUIRE(trace.stats.size() == 1);
  CHECK(trace.stats[0].inner_steps.size() == 1);
  CHECK(trace.stats[0].residuals[0] < opts.iter_tolerance);

  opts.alpha = 0.5;
  opts.mode = PprMode::Exact;
  CHECK_THROWS_AS(impute_pers_pagerank(f, edge, opts), Error);
  opts.mode = PprMode::Iterative;
  try {
    impute_pers_pagerank(f, edge, opts);
    FAIL("expected DivergentDiffusion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergentDiffusion);
  }
}

TEST_CASE("impute_pers_pagerank with alpha = 1 reproduces zeros") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(rng, 20, 0.2, true);
    const auto f = oracle::random_features(rng, 20, {4}, 0.3);
    for (auto mode : {PprMode::Exact, PprMode::Iterative}) {
      PprOptions opts;
      opts.alpha = 1.0;
      opts.hops = 3;
      opts.mode = mode;
      CHECK(impute_pers_pagerank(f, g, opts) == impute_zeros(f));
    }
  }
}

TEST_CASE("pers_pagerank without clamping still restores observed rows in the output") {
  const auto g = graph(3, {{0, 1}, {1, 2}});
  const auto f = one_modality(3, 1, {1, 0, 3}, {0, 1, 0});
  PprOptions opts;
  opts.hops = 3;
  opts.clamp = false;
  const auto out = impute_pers_pagerank(f, g, opts);
  CHECK(out.modalities[0].values.at(0, 0) == 1.0);
  CHECK(out.modalities[0].values.at(2, 0) == 3.0);
  opts.clamp = true;
  CHECK(impute_pers_pagerank(f, g, opts).modalities[0].values.at(1, 0) !=
        out.modalities[0].values.at(1, 0));
}

TEST_CASE("PPR iterative agrees with the exact dense operator") {
  oracle::Rng rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = oracle::uniform(rng, 2, 50);
    const auto g = oracle::random_graph(rng, n, 0.08, true);
    const auto f = oracle::random_features(rng, n, {5}, 0.3);
    for (double alpha : {0.6, 0.75, 0.9}) {
      PprOptions opts;
      opts.alpha = alpha;
      opts.hops = 1 + static_cast<std::size_t>(trial % 4);
      opts.mode = PprMode::Exact;
      const auto a = impute_pers_pagerank(f, g, opts);
      opts.mode = PprMode::Iterative;
      const auto b = impute_pers_pagerank(f, g, opts);
      for (std::size_t k = 0; k < a.modalities[0].values.data().size(); ++k)
        REQUIRE(std::abs(a.modalities[0].values.data()[k] - b.modalities[0].values.data()[k]) < 1e-6);
    }
  }
}

TEST_CASE("linear imputers scale with the observed features") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(rng, 25, 0.15, true);
    const auto f = oracle::random_features(rng, 25, {4}, 0.3);
    for (double c : {2.0, 0.25, 8.0}) {
      FeatureSet scaled = f;
      for (double& v : scaled.modalities[0].values.data()) v *= c;
      auto check = [&](const FeatureSet& base, const FeatureSet& s) {
        for (std::size_t k = 0; k < base.modalities[0].values.data().size(); ++k)
          REQUIRE(s.modalities[0].values.data()[k] == c * base.modalities[0].values.data()[k]);
      };
      check(impute_neigh_mean(f, g, ColdFallback::Zeros), impute_neigh_mean(scaled, g, ColdFallback::Zeros));
      const auto sym = sym_norm_adjacency(g);
      check(impute_multihop(f, sym, 4, ColdFallback::Zeros), impute_multihop(scaled, sym, 4, ColdFallback::Zeros));
      PprOptions opts;
      opts.hops = 3;
      opts.mode = PprMode::Exact;
      check(impute_pers_pagerank(f, g, opts), impute_pers_pagerank(scaled, g, opts));
    }
  }
}

TEST_CASE("impute dispatcher") {
  // Items a, b share a user; c is only seen by u3 so it stays isolated.
  const std::vector<std::pair<std::string, std::string>> p{
      {"u1", "a"}, {"u1", "b"}, {"u2", "a"}, {"u2", "b"}, {"u3", "c"}};
  const auto r = build_interaction_matrix(p);
  const auto f = one_modality(3, 2, {1, 2, 3, 4, 0, 0}, {0, 0, 1});

  ImputeConfig cfg;
  cfg.method = Method::Zeros;
  CHECK(impute(f, r, cfg).first == impute_zeros(f));

  cfg.method = Method::NeighMean;
  cfg.cold_fallback = ColdFallback::Zeros;
  auto [out, report] = impute(f, r, cfg);
  CHECK(row(out, 2) == std::vector<double>{0, 0});
  CHECK(report.cold_items == 1);
  REQUIRE(report.modalities.size() == 1);
  CHECK(report.modalities[0].imputed_rows == 1);
  CHECK(report.modalities[0].cold_rows == 1);

  cfg.method = Method::PersPageRank;
  cfg.ppr_mode = PprMode::Exact;
  cfg.exact_cap = 2;
  try {
    impute(f, r, cfg);
    FAIL("expected GraphTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GraphTooLarge);
  }

  cfg.top_k = 0;
  CHECK_THROWS_AS(impute(f, r, cfg), Error);
}

TEST_CASE("impute dispatcher output does not depend on thread count") {
  oracle::Rng rng(2);
  const auto r = oracle::random_interactions(rng, 30, 30);
  const auto f = oracle::random_features(rng, r.n_items(), {4, 6, 2}, 0.3);
  for (Method m : {Method::NeighMean, Method::MultiHop, Method::PersPageRank}) {
    ImputeConfig cfg;
    cfg.method = m;
    cfg.top_k = 5;
    cfg.hops = 3;
    const auto one = impute(f, r, cfg).first;
    cfg.threads = 3;
    CHECK(impute(f, r, cfg).first == one);
  }
}
