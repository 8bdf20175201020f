#include "graphimpute/item_graph.hpp"

#include <algorithm>
#include <numeric>

#include "graphimpute/error.hpp"

namespace graphimpute {

ItemGraph::ItemGraph(std::size_t n_items, GraphKind kind, std::vector<std::size_t> offsets,
                     std::vector<Index> neighbor_ids, std::vector<std::uint32_t> edge_weights)
    : n_items_(n_items),
      kind_(kind),
      offsets_(std::move(offsets)),
      neighbors_(std::move(neighbor_ids)),
      weights_(std::move(edge_weights)) {
  if (offsets_.size() != n_items_ + 1 || offsets_.front() != 0 ||
      offsets_.back() != neighbors_.size() || weights_.size() != neighbors_.size()) {
    throw Error(ErrorKind::InvalidParameter, "malformed item graph CSR arrays");
  }
  for (std::size_t i = 0; i < n_items_; ++i) {
    if (offsets_[i + 1] < offsets_[i]) {
      throw Error(ErrorKind::InvalidParameter, "item graph offsets not monotone");
    }
  }
  for (std::size_t i = 0; i < n_items_; ++i) {
    const auto row = neighbors(static_cast<Index>(i));
    const auto w = weights(static_cast<Index>(i));
    for (std::size_t p = 0; p < row.size(); ++p) {
      const Index j = row[p];
      if (j >= n_items_ || j == i || (p > 0 && row[p - 1] >= j)) {
        throw Error(ErrorKind::InvalidParameter,
                    "item graph row not sorted, out of range or has a self loop");
      }
      if (w[p] == 0 || (kind_ == GraphKind::Binary && w[p] != 1)) {
        throw Error(ErrorKind::InvalidParameter, "item graph weight violates its kind");
      }
      if (weight(j, static_cast<Index>(i)) != w[p]) {
        throw Error(ErrorKind::InvalidParameter, "item graph is not symmetric");
      }
    }
  }
}

std::span<const Index> ItemGraph::neighbors(Index item) const {
  return std::span<const Index>(neighbors_).subspan(offsets_[item], degree(item));
}

std::span<const std::uint32_t> ItemGraph::weights(Index item) const {
  return std::span<const std::uint32_t>(weights_).subspan(offsets_[item], degree(item));
}

std::uint32_t ItemGraph::weight(Index i, Index j) const {
  const auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return 0;
  return weights(i)[static_cast<std::size_t>(it - row.begin())];
}

ItemGraph cooccurrence(const InteractionMatrix& r) {
  const std::size_t n = r.n_items();
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<Index> neighbors;
  std::vector<std::uint32_t> weights;

  // Dense accumulator per row; touched columns are sorted before emitting,
  // so the result does not depend on user order.
  std::vector<std::uint32_t> acc(n, 0);
  std::vector<Index> touched;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    for (Index u : r.users_of(static_cast<Index>(i))) {
      for (Index j : r.items_of(u)) {
        if (j == i) continue;
        if (acc[j]++ == 0) touched.push_back(j);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (Index j : touched) {
      neighbors.push_back(j);
      weights.push_back(acc[j]);
      acc[j] = 0;
    }
    offsets[i + 1] = neighbors.size();
  }
  return ItemGraph(n, GraphKind::Counts, std::move(offsets), std::move(neighbors),
                   std::move(weights));
}

std::vector<Index> topk_row_selection(const ItemGraph& counts, Index item, std::size_t k) {
  const auto row = counts.neighbors(item);
  const auto w = counts.weights(item);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(k, order.size());
  // Rows are index-sorted, so position order is index order for ties.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (w[a] != w[b]) return w[a] > w[b];
                      return a < b;
                    });
  std::vector<Index> selected;
  selected.reserve(keep);
  for (std::size_t p = 0; p < keep; ++p) selected.push_back(row[order[p]]);
  std::sort(selected.begin(), selected.end());
  return selected;
}

namespace {

ItemGraph from_directed_pairs(std::size_t n, std::vector<std::pair<Index, Index>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<Index> neighbors;
  neighbors.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    ++offsets[i + 1];
    neighbors.push_back(j);
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::uint32_t> weights(neighbors.size(), 1);
  return ItemGraph(n, GraphKind::Binary, std::move(offsets), std::move(neighbors),
                   std::move(weights));
}

}  // namespace

ItemGraph topk_sparsify(const ItemGraph& counts, std::size_t k) {
  if (k == 0) {
    throw Error(ErrorKind::InvalidParameter, "top-k must be at least 1");
  }
  if (counts.kind() != GraphKind::Counts) {
    throw Error(ErrorKind::InvalidParameter, "top-k sparsification expects a Counts graph");
  }
  const std::size_t n = counts.n_items();
  std::vector<std::pair<Index, Index>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (Index j : topk_row_selection(counts, static_cast<Index>(i), k)) {
      pairs.emplace_back(static_cast<Index>(i), j);
      pairs.emplace_back(j, static_cast<Index>(i));
    }
  }
  return from_directed_pairs(n, std::move(pairs));
}

ItemGraph binary_graph_from_edges(std::size_t n_items,
                                  std::span<const std::pair<Index, Index>> edges) {
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a == b || a >= n_items || b >= n_items) {
      throw Error(ErrorKind::InvalidParameter, "edge is a self loop or out of range");
    }
    pairs.emplace_back(a, b);
    pairs.emplace_back(b, a);
  }
  return from_directed_pairs(n_items, std::move(pairs));
}

}  // namespace graphimpute
