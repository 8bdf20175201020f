#include <doctest.h>

#include "oracles.hpp"

using namespace graphimpute;

namespace {

ItemGraph edge_graph() {
  const std::vector<std::pair<Index, Index>> e{{0, 1}};
  return binary_graph_from_edges(2, e);
}

ItemGraph path_graph() {
  const std::vector<std::pair<Index, Index>> e{{0, 1}, {1, 2}};
  return binary_graph_from_edges(3, e);
}

double sparse_at(const SparseOperator& op, std::size_t i, std::size_t j) {
  const auto cols = op.columns_of(i);
  for (std::size_t p = 0; p < cols.size(); ++p)
    if (cols[p] == j) return op.values_of(i)[p];
  return 0.0;
}

}  // namespace

TEST_CASE("sym_norm_adjacency entries") {
  CHECK(sparse_at(sym_norm_adjacency(edge_graph()).sparse(), 0, 1) == 1.0);

  const auto op = sym_norm_adjacency(path_graph());
  CHECK(sparse_at(op.sparse(), 0, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
  CHECK(sparse_at(op.sparse(), 1, 1) == 0.0);
  CHECK(sparse_at(op.sparse(), 0, 2) == 0.0);

  const std::vector<std::pair<Index, Index>> e{{0, 1}};
  const auto iso = sym_norm_adjacency(binary_graph_from_edges(3, e));
  CHECK(iso.sparse().columns_of(2).empty());
  CHECK(iso.degree(2) == 0);
}

TEST_CASE("self_loop_adjacency adds 1/|N_i| on the diagonal") {
  const auto op = self_loop_adjacency(path_graph(), 0.85);
  CHECK(sparse_at(op.sparse(), 0, 0) == 1.0);
  CHECK(sparse_at(op.sparse(), 1, 1) == 0.5);
  CHECK(sparse_at(op.sparse(), 1, 0) == sparse_at(op.sparse(), 0, 1));
  CHECK_THROWS_AS(self_loop_adjacency(path_graph(), 0.0), Error);
}

TEST_CASE("ppr_exact at alpha = 1 is the identity") {
  const auto op = ppr_exact(path_graph(), 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(op.dense_at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("ppr_exact two-node closed form") {
  const auto b = ppr_system_matrix(edge_graph(), 0.9);
  CHECK(b[0] == doctest::Approx(0.9));
  CHECK(b[1] == doctest::Approx(-0.1));
  // Independent 2x2 inverse.
  const auto inv = oracle::dense_inverse(b, 2);
  CHECK(0.9 * inv[0] == doctest::Approx(1.0125).epsilon(1e-12));
  CHECK(0.9 * inv[1] == doctest::Approx(0.1125).epsilon(1e-12));

  const auto op = ppr_exact(edge_graph(), 0.9);
  CHECK(std::abs(op.dense_at(0, 0) - 1.0125) < 1e-12);
  CHECK(std::abs(op.dense_at(0, 1) - 0.1125) < 1e-12);
  CHECK(std::abs(op.dense_at(1, 0) - 0.1125) < 1e-12);
  CHECK(std::abs(op.dense_at(1, 1) - 1.0125) < 1e-12);
}

TEST_CASE("ppr_exact errors") {
  try {
    ppr_exact(edge_graph(), 0.5);
    FAIL("expected SingularDiffusion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularDiffusion);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  try {
    ppr_exact(path_graph(), 0.85, 2);
    FAIL("expected GraphTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GraphTooLarge);
  }
}

TEST_CASE("ppr_exact satisfies (alpha B^-1) B = alpha I on random graphs") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = oracle::uniform(rng, 2, 50);
    const auto g = oracle::random_graph(rng, n, 0.1, trial % 2 == 0);
    for (double alpha : {0.6, 0.75, 0.9}) {
      const auto op = ppr_exact(g, alpha);
      const auto b = ppr_system_matrix(g, alpha);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += op.dense_at(i, k) * b[k * n + j];
          REQUIRE(std::abs(s - (i == j ? alpha : 0.0)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("operators are exactly symmetric") {
  oracle::Rng rng(4);
  const auto g = oracle::random_graph(rng, 30, 0.2, true);
  const auto sym = sym_norm_adjacency(g).sparse();
  const auto exact = ppr_exact(g, 0.85);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = 0; j < 30; ++j) {
      REQUIRE(sparse_at(sym, i, j) == sparse_at(sym, j, i));
      REQUIRE(std::abs(exact.dense_at(i, j) - exact.dense_at(j, i)) < 1e-12);
    }
  }
}
