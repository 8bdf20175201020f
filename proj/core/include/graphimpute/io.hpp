#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphimpute/features.hpp"
#include "graphimpute/interactions.hpp"

namespace graphimpute {

// Interaction files: one "user_id<TAB>item_id" per line; blank lines and
// lines starting with '#' are skipped.
InteractionMatrix parse_interactions(std::istream& in);
InteractionMatrix read_interactions(const std::filesystem::path& path);
// Writes entries in stored order, so reading back reproduces the indexing.
void write_interactions(const std::filesystem::path& path, const InteractionMatrix& r);

// Feature files: "FMATv1\0\0", u64 n_items, u64 dim, then n_items*dim
// float32, all little-endian, row-major. Values are widened to double on
// read; writing narrows to float32 and rejects non-finite values.
inline constexpr char kFeatureMagic[8] = {'F', 'M', 'A', 'T', 'v', '1', '\0', '\0'};

FeatureMatrix read_feature_matrix(const std::filesystem::path& path);
void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m);

// Modality name -> ascending, de-duplicated missing item indices.
using MaskSets = std::map<std::string, std::vector<Index>>;

// Mask files: one "item_id<TAB>modality" per line. Unknown item ids raise
// Error(UnknownItem) with the line number.
MaskSets parse_mask(std::istream& in, const InteractionMatrix& r);
MaskSets read_mask(const std::filesystem::path& path, const InteractionMatrix& r);
void write_mask(const std::filesystem::path& path, const FeatureSet& f, const InteractionMatrix& r);

struct Dataset {
  InteractionMatrix interactions;
  FeatureSet features;
};

// Loads interactions plus named feature files, applies the mask (an empty
// path means nothing is missing) and zeroes masked rows. Mask modalities
// that have no feature file raise Error(ParseError).
Dataset load_dataset(const std::filesystem::path& interactions,
                     const std::vector<std::pair<std::string, std::filesystem::path>>& features,
                     const std::filesystem::path& mask);

}  // namespace graphimpute
