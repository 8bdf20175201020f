#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphimpute/config.hpp"
#include "graphimpute/features.hpp"
#include "graphimpute/interactions.hpp"
#include "graphimpute/item_graph.hpp"
#include "graphimpute/operators.hpp"

namespace graphimpute {

// All imputers are pure: they return a new FeatureSet in which every
// previously missing row is filled, `missing` is cleared and `imputed` marks
// the filled rows. Observed rows are copied bit for bit.
//
// Row reductions over neighbors sum their terms in ascending value order.
// That makes each output row a function of the multiset of contributions
// only, so relabeling items permutes the output exactly.

struct ModalityRunStats {
  std::string modality;
  std::size_t imputed_rows = 0;
  std::size_t cold_rows = 0;
  std::size_t hops = 0;
  // Iterative personalized PageRank only: fixed-point steps and final
  // max-entry residual per hop.
  std::vector<std::size_t> inner_steps;
  std::vector<double> residuals;
};

// Called after each hop with the clamped iterate (1-based hop index).
using IterationObserver =
    std::function<void(std::string_view modality, std::size_t hop, const FeatureMatrix& iterate)>;

struct DiffusionTrace {
  IterationObserver on_iteration;
  std::vector<ModalityRunStats> stats;
};

struct PprOptions {
  double alpha = 0.85;
  std::size_t hops = 10;
  PprMode mode = PprMode::Iterative;
  double iter_tolerance = 1e-8;
  std::size_t max_steps = 500;
  std::size_t exact_cap = kDefaultExactCap;
  bool clamp = true;
  ColdFallback cold_fallback = ColdFallback::GlobalMean;
};

// Column-wise mean of the observed rows; NoObservedFeatures if there are none.
std::vector<double> observed_mean(const Modality& m);

FeatureSet impute_zeros(const FeatureSet& f);

// Uniform [0, 1) draws from one mt19937_64 stream consumed in
// (modality, item, column) order.
FeatureSet impute_random(const FeatureSet& f, std::uint64_t seed);

FeatureSet impute_global_mean(const FeatureSet& f);

FeatureSet impute_neigh_mean(const FeatureSet& f, const ItemGraph& g, ColdFallback fallback,
                             NeighborPolicy policy = NeighborPolicy::ZeroPlaceholder);

// `op` must be a SymLaplacian operator.
FeatureSet impute_multihop(const FeatureSet& f, const NormalizedOperator& op, std::size_t hops,
                           ColdFallback fallback, DiffusionTrace* trace = nullptr);

// `op` must be PprExact (dense alpha B^-1) or PprIterative (self-loop
// adjacency); opts.mode is ignored in favor of the operator mode.
FeatureSet impute_pers_pagerank(const FeatureSet& f, const NormalizedOperator& op,
                                const PprOptions& opts, DiffusionTrace* trace = nullptr);

// Builds the operator named by opts.mode from `g`.
FeatureSet impute_pers_pagerank(const FeatureSet& f, const ItemGraph& g, const PprOptions& opts,
                                DiffusionTrace* trace = nullptr);

struct ImputationRunReport {
  ImputeConfig config;
  std::size_t graph_edges = 0;
  std::size_t cold_items = 0;
  std::vector<ModalityRunStats> modalities;
  double graph_time_ms = 0.0;
  double wall_time_ms = 0.0;
};

PprOptions ppr_options(const ImputeConfig& cfg);

// Full pipeline: cooccurrence -> top-k -> method, per modality.
std::pair<FeatureSet, ImputationRunReport> impute(const FeatureSet& f, const InteractionMatrix& r,
                                                  const ImputeConfig& cfg);

// Same, reusing a precomputed Counts graph (sweeps).
std::pair<FeatureSet, ImputationRunReport> impute(const FeatureSet& f, const ItemGraph& counts,
                                                  const ImputeConfig& cfg);

}  // namespace graphimpute
