#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "graphimpute/operators.hpp"

namespace graphimpute {

enum class Method { Zeros, Random, GlobalMean, NeighMean, MultiHop, PersPageRank };
enum class PprMode { Exact, Iterative };
enum class ColdFallback { Zeros, GlobalMean };

// How NeighMean treats neighbors that are themselves missing.
//   ZeroPlaceholder  they contribute their zero row and count toward |N_i|
//   ObservedOnly     they are skipped; items with no observed neighbor are cold
enum class NeighborPolicy { ZeroPlaceholder, ObservedOnly };

struct ImputeConfig {
  Method method = Method::Zeros;
  std::size_t top_k = 20;
  std::size_t hops = 10;
  double alpha = 0.85;
  std::uint64_t seed = 0;
  PprMode ppr_mode = PprMode::Iterative;
  ColdFallback cold_fallback = ColdFallback::GlobalMean;
  NeighborPolicy neighbor_policy = NeighborPolicy::ZeroPlaceholder;
  double iter_tolerance = 1e-8;
  std::size_t max_steps = 500;
  std::size_t exact_cap = kDefaultExactCap;
  bool clamp = true;
  // Modalities imputed concurrently; results do not depend on it.
  std::size_t threads = 1;

  // Throws Error(InvalidParameter).
  void validate() const;
};

bool uses_graph(Method m) noexcept;
bool uses_hops(Method m) noexcept;

// CLI spellings: zeros, random, global-mean, neigh-mean, multihop, pers-pagerank.
std::string_view to_string(Method m) noexcept;
std::string_view to_string(PprMode m) noexcept;
std::string_view to_string(ColdFallback m) noexcept;
std::string_view to_string(NeighborPolicy m) noexcept;

// Throw Error(InvalidParameter) on unknown names.
Method parse_method(std::string_view name);
PprMode parse_ppr_mode(std::string_view name);
ColdFallback parse_fallback(std::string_view name);
NeighborPolicy parse_neighbor_policy(std::string_view name);

}  // namespace graphimpute

#include <vector>

namespace graphimpute {

// "start:stop:step" inclusive, e.g. "10:100:10" -> 10, 20, ..., 100. A bare
// number is a one-element grid.
std::vector<std::size_t> parse_grid(std::string_view spec);

}  // namespace graphimpute
