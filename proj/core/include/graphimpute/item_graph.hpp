#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphimpute/interactions.hpp"

namespace graphimpute {

enum class GraphKind { Counts, Binary };

// Symmetric item x item graph in CSR form. Rows are sorted by neighbor
// index and never contain the diagonal.
class ItemGraph {
 public:
  ItemGraph() = default;

  // Validates symmetry, sortedness, absence of self loops and the
  // kind-specific weight contract; throws Error(InvalidParameter).
  ItemGraph(std::size_t n_items, GraphKind kind, std::vector<std::size_t> offsets,
            std::vector<Index> neighbors, std::vector<std::uint32_t> weights);

  std::size_t n_items() const noexcept { return n_items_; }
  GraphKind kind() const noexcept { return kind_; }

  std::span<const Index> neighbors(Index item) const;
  std::span<const std::uint32_t> weights(Index item) const;
  std::size_t degree(Index item) const { return offsets_[item + 1] - offsets_[item]; }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }

  // 0 when the edge is absent.
  std::uint32_t weight(Index i, Index j) const;

  // Undirected edge count.
  std::size_t n_edges() const noexcept { return neighbors_.size() / 2; }

  friend bool operator==(const ItemGraph&, const ItemGraph&) = default;

 private:
  std::size_t n_items_ = 0;
  GraphKind kind_ = GraphKind::Counts;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> neighbors_;
  std::vector<std::uint32_t> weights_;
};

// R^T R with the diagonal (item popularity) discarded.
ItemGraph cooccurrence(const InteractionMatrix& r);

// The k neighbors of `item` with the largest counts, ties broken by lower
// item index; returned in ascending index order.
std::vector<Index> topk_row_selection(const ItemGraph& counts, Index item, std::size_t k);

// Binarized top-k graph; an edge survives when either endpoint selects it.
ItemGraph topk_sparsify(const ItemGraph& counts, std::size_t k);

// Builds a Binary graph from an undirected edge list (test and synthetic
// helper). Duplicate and reversed edges collapse; self loops are rejected.
ItemGraph binary_graph_from_edges(std::size_t n_items,
                                  std::span<const std::pair<Index, Index>> edges);

}  // namespace graphimpute
