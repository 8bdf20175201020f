#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphimpute/item_graph.hpp"

namespace graphimpute {

inline constexpr std::size_t kDefaultExactCap = 2000;
inline constexpr double kMaxConditionEstimate = 1e12;

// Row-compressed real operator over items.
struct SparseOperator {
  std::size_t n = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<Index> columns;
  std::vector<double> values;

  std::span<const Index> columns_of(std::size_t row) const {
    return std::span<const Index>(columns).subspan(offsets[row], offsets[row + 1] - offsets[row]);
  }
  std::span<const double> values_of(std::size_t row) const {
    return std::span<const double>(values).subspan(offsets[row], offsets[row + 1] - offsets[row]);
  }
};

enum class OperatorMode { SymLaplacian, PprExact, PprIterative };

// Diffusion operator derived from a Binary item graph.
//  SymLaplacian  sparse, entry (i,j) = 1/(sqrt|N_i| sqrt|N_j|) for j in N_i
//  PprIterative  sparse self-loop adjacency: the SymLaplacian entries plus
//                1/|N_i| on the diagonal, so that B = I - (1-alpha) * this
//  PprExact      dense row-major alpha * B^-1
class NormalizedOperator {
 public:
  NormalizedOperator(OperatorMode mode, double alpha, SparseOperator sparse,
                     std::vector<double> dense, std::vector<std::size_t> degrees);

  OperatorMode mode() const noexcept { return mode_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t n_items() const noexcept { return degrees_.size(); }
  std::size_t degree(std::size_t item) const { return degrees_[item]; }

  const SparseOperator& sparse() const noexcept { return sparse_; }

  // Empty unless mode() == PprExact.
  std::span<const double> dense() const noexcept { return dense_; }
  double dense_at(std::size_t i, std::size_t j) const { return dense_[i * n_items() + j]; }

 private:
  OperatorMode mode_;
  double alpha_;
  SparseOperator sparse_;
  std::vector<double> dense_;
  std::vector<std::size_t> degrees_;
};

NormalizedOperator sym_norm_adjacency(const ItemGraph& g);

// Requires 0 < alpha <= 1.
NormalizedOperator self_loop_adjacency(const ItemGraph& g, double alpha);

// Dense B with B_ii = 1 - (1-alpha)/|N_i|, B_ij = -(1-alpha)/(sqrt|N_i| sqrt|N_j|)
// on edges and 0 elsewhere. Isolated items get an identity row.
std::vector<double> ppr_system_matrix(const ItemGraph& g, double alpha);

// alpha * B^-1 by LU solve. Raises GraphTooLarge above `max_items` and
// SingularDiffusion when the condition estimate of B exceeds 1e12.
NormalizedOperator ppr_exact(const ItemGraph& g, double alpha,
                             std::size_t max_items = kDefaultExactCap);

}  // namespace graphimpute
