#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphimpute/features.hpp"
#include "graphimpute/interactions.hpp"

namespace graphimpute {

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t n_items = 0;
  std::size_t n_interactions = 0;
  std::map<std::string, std::size_t> missing;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats dataset_stats(const InteractionMatrix& r, const FeatureSet& f);

struct DropResult {
  InteractionMatrix interactions;
  FeatureSet features;
  DatasetStats before;
  DatasetStats after;
  // Original index of each surviving item.
  std::vector<Index> kept_items;
};

// Removes items missing any modality, then their interactions, then users
// left with none. Survivors keep their relative order. EmptyDataset when
// nothing remains.
DropResult drop_missing(const InteractionMatrix& r, const FeatureSet& f);

// Held-out ground truth for one modality.
struct HiddenRows {
  std::string modality;
  std::vector<Index> items;  // ascending
  FeatureMatrix truth;       // one row per entry of `items`
};

struct MaskResult {
  FeatureSet masked;
  std::vector<HiddenRows> hidden;
};

// Hides floor(fraction * observed) observed rows per modality, sampled
// without replacement. InvalidParameter if that count is zero for any
// modality or fraction is outside (0, 1).
MaskResult mask_features(const FeatureSet& f, double fraction, std::uint64_t seed);

struct ModalityMetrics {
  std::string modality;
  std::size_t n_evaluated = 0;
  double rmse = 0.0;
  // Mean over rows where both vectors have nonzero norm.
  double mean_cosine = 0.0;
  std::size_t n_cosine = 0;
  std::size_t n_cosine_excluded = 0;
};

struct EvalReport {
  std::vector<ModalityMetrics> modalities;
};

EvalReport reconstruction_metrics(const FeatureSet& imputed, const std::vector<HiddenRows>& truth);

struct ModalitySpec {
  std::string name;
  std::size_t dim = 0;
};

struct SynthParams {
  std::size_t n_users = 800;
  std::size_t n_items = 400;
  std::size_t n_communities = 8;
  double p_in = 0.3;
  double p_out = 0.01;
  std::vector<ModalitySpec> modalities{{"visual", 32}, {"text", 32}};
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
};

struct SynthDataset {
  InteractionMatrix interactions;
  FeatureSet features;
  // Community of each item, in InteractionMatrix index order.
  std::vector<std::size_t> item_community;
};

// Planted-community generator. Users and items are assigned round-robin to
// communities; any user or item left without an interaction is linked to one
// member of its own community so every id appears in the interaction list.
// Indices follow first appearance in user-major order, i.e. exactly what
// re-reading the written interaction file yields.
SynthDataset synth_generate(const SynthParams& p);

}  // namespace graphimpute

#include <optional>

#include "graphimpute/config.hpp"
#include "graphimpute/error.hpp"

namespace graphimpute {

// Mask-and-recover sweep over methods x top-k x hops. Grids only expand for
// methods that use them (top-k for graph methods, hops for MultiHop and
// PersPageRank).
struct SweepConfig {
  std::vector<Method> methods;
  std::vector<std::size_t> top_k_grid{20};
  std::vector<std::size_t> hops_grid{10};
  ImputeConfig base;
  double hide_fraction = 0.2;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct SweepRow {
  std::size_t index = 0;
  ImputeConfig config;
  EvalReport metrics;
  // Set when the run failed numerically (SingularDiffusion,
  // DivergentDiffusion) or the graph was too large for exact mode.
  std::optional<ErrorKind> error;
  std::string error_message;
  double wall_time_ms = 0.0;
};

std::vector<ImputeConfig> expand_sweep(const SweepConfig& sweep);

// Seed of run `index`; decorrelated from neighboring indices.
std::uint64_t derive_seed(std::uint64_t base, std::size_t index) noexcept;

std::vector<SweepRow> run_sweep(const InteractionMatrix& r, const FeatureSet& f,
                                const SweepConfig& sweep);

}  // namespace graphimpute
