#include "graphimpute/features.hpp"

#include <algorithm>
#include <cmath>

#include "graphimpute/error.hpp"

namespace graphimpute {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::InvalidParameter, "feature matrix payload does not match its shape");
  }
}

std::size_t Modality::missing_count() const {
  return static_cast<std::size_t>(std::count_if(missing.begin(), missing.end(),
                                                [](std::uint8_t m) { return m != 0; }));
}

Modality make_modality(std::string name, FeatureMatrix values,
                       std::vector<std::uint8_t> missing) {
  if (missing.empty()) missing.assign(values.rows(), 0);
  if (missing.size() != values.rows()) {
    throw Error(ErrorKind::InvalidParameter,
                "mask length does not match row count for modality '" + name + "'");
  }
  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (missing[i]) std::ranges::fill(values.row(i), 0.0);
  }
  std::vector<std::uint8_t> imputed(values.rows(), 0);
  return Modality{std::move(name), std::move(values), std::move(missing), std::move(imputed)};
}

const Modality* FeatureSet::find(std::string_view name) const {
  for (const auto& m : modalities) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

Modality* FeatureSet::find(std::string_view name) {
  for (auto& m : modalities) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

ValidationReport validate(const FeatureSet& f, const InteractionMatrix& r) {
  ValidationReport report;
  auto flag = [&](const Modality& m, std::optional<std::size_t> item, std::string what) {
    report.ok = false;
    report.violations.push_back({m.name, item, std::move(what)});
  };

  for (const auto& m : f.modalities) {
    report.missing[m.name] = m.missing_count();
    if (m.values.rows() != r.n_items()) {
      flag(m, std::nullopt,
           "row count " + std::to_string(m.values.rows()) + " != n_items " +
               std::to_string(r.n_items()));
    }
    if (m.missing.size() != m.values.rows() || m.imputed.size() != m.values.rows()) {
      flag(m, std::nullopt, "mask length does not match row count");
      continue;
    }
    for (std::size_t i = 0; i < m.values.rows(); ++i) {
      const auto row = m.values.row(i);
      if (m.is_missing(i)) {
        if (std::ranges::any_of(row, [](double v) { return v != 0.0; })) {
          flag(m, i, "masked row is not a zero placeholder");
        }
      } else if (!std::ranges::all_of(row, [](double v) { return std::isfinite(v); })) {
        flag(m, i, "non-finite value in observed row");
      }
    }
  }
  return report;
}

}  // namespace graphimpute
