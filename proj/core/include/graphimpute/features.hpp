#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphimpute/interactions.hpp"

namespace graphimpute {

// Dense row-major items x dim matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One modality: a feature matrix plus whole-row missingness.
//   missing[i] != 0  row i is absent and holds a zero placeholder
//   imputed[i] != 0  row i was filled by an imputer (missing is then cleared)
struct Modality {
  std::string name;
  FeatureMatrix values;
  std::vector<std::uint8_t> missing;
  std::vector<std::uint8_t> imputed;

  std::size_t missing_count() const;
  bool is_missing(std::size_t item) const { return missing[item] != 0; }

  friend bool operator==(const Modality&, const Modality&) = default;
};

// Zeroes the masked rows so the placeholder contract holds from the start.
Modality make_modality(std::string name, FeatureMatrix values, std::vector<std::uint8_t> missing);

struct FeatureSet {
  std::vector<Modality> modalities;

  std::size_t n_items() const { return modalities.empty() ? 0 : modalities.front().values.rows(); }
  const Modality* find(std::string_view name) const;
  Modality* find(std::string_view name);

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

struct Violation {
  std::string modality;
  std::optional<std::size_t> item;
  std::string what;
};

struct ValidationReport {
  bool ok = true;
  std::map<std::string, std::size_t> missing;
  std::vector<Violation> violations;
};

ValidationReport validate(const FeatureSet& f, const InteractionMatrix& r);

}  // namespace graphimpute
