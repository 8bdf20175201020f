#include "graphimpute/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "graphimpute/error.hpp"

namespace graphimpute {

namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw Error(ErrorKind::FormatError, "cannot write '" + path.string() + "'");
  return out;
}

// Splits "a<TAB>b"; false unless exactly one tab with both fields non-empty.
bool split_pair(std::string_view line, std::string& first, std::string& second) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
    return false;
  }
  first.assign(line.substr(0, tab));
  second.assign(line.substr(tab + 1));
  return !first.empty() && !second.empty();
}

// Yields (line number, content) for non-blank, non-comment lines.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    fn(number, std::string_view(line));
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t k = 0; k < 8; ++k) bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return v;
}

}  // namespace

InteractionMatrix parse_interactions(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string user, item;
  for_each_record(in, [&](std::size_t number, std::string_view line) {
    if (!split_pair(line, user, item)) {
      throw Error(ErrorKind::ParseError, "expected 'user_id<TAB>item_id'", number);
    }
    pairs.emplace_back(user, item);
  });
  if (pairs.empty()) throw Error(ErrorKind::EmptyDataset, "interaction file has no records");
  return build_interaction_matrix(pairs);
}

InteractionMatrix read_interactions(const std::filesystem::path& path) {
  auto in = open_text(path);
  return parse_interactions(in);
}

void write_interactions(const std::filesystem::path& path, const InteractionMatrix& r) {
  auto out = open_out(path);
  for (const auto& e : r.entries()) {
    out << r.user_ids()[e.user] << '\t' << r.item_ids()[e.item] << '\n';
  }
  if (!out) throw Error(ErrorKind::FormatError, "write failed for '" + path.string() + "'");
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FormatError, "cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in '" + path.string() + "'";
  if (bytes.size() < 24) throw Error(ErrorKind::FormatError, "truncated header" + where);
  if (std::memcmp(bytes.data(), kFeatureMagic, 8) != 0) {
    throw Error(ErrorKind::FormatError, "bad magic" + where);
  }
  const std::uint64_t rows = get_u64(bytes.data() + 8);
  const std::uint64_t cols = get_u64(bytes.data() + 16);
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    throw Error(ErrorKind::FormatError, "implausible shape" + where);
  }
  const std::uint64_t payload = rows * cols * 4;
  if (bytes.size() - 24 != payload) {
    throw Error(ErrorKind::FormatError,
                (bytes.size() - 24 < payload ? "truncated payload" : "trailing bytes") + where);
  }
  std::vector<double> values(rows * cols);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const unsigned char* p = bytes.data() + 24 + 4 * k;
    const std::uint32_t word = static_cast<std::uint32_t>(p[0]) |
                               static_cast<std::uint32_t>(p[1]) << 8 |
                               static_cast<std::uint32_t>(p[2]) << 16 |
                               static_cast<std::uint32_t>(p[3]) << 24;
    values[k] = static_cast<double>(std::bit_cast<float>(word));
  }
  return FeatureMatrix(rows, cols, std::move(values));
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  std::vector<char> payload(m.data().size() * 4);
  for (std::size_t k = 0; k < m.data().size(); ++k) {
    const double v = m.data()[k];
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      throw Error(ErrorKind::FormatError, "non-finite feature value cannot be written to '" +
                                              path.string() + "'");
    }
    const auto word = std::bit_cast<std::uint32_t>(f);
    for (std::size_t b = 0; b < 4; ++b) payload[4 * k + b] = static_cast<char>((word >> (8 * b)) & 0xffu);
  }
  auto out = open_out(path, std::ios::binary);
  out.write(kFeatureMagic, 8);
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorKind::FormatError, "write failed for '" + path.string() + "'");
}

MaskSets parse_mask(std::istream& in, const InteractionMatrix& r) {
  MaskSets sets;
  std::string item, modality;
  for_each_record(in, [&](std::size_t number, std::string_view line) {
    if (!split_pair(line, item, modality)) {
      throw Error(ErrorKind::ParseError, "expected 'item_id<TAB>modality'", number);
    }
    const auto idx = r.find_item(item);
    if (!idx) throw Error(ErrorKind::UnknownItem, "unknown item id '" + item + "'", number);
    sets[modality].push_back(*idx);
  });
  for (auto& [name, items] : sets) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
  }
  return sets;
}

MaskSets read_mask(const std::filesystem::path& path, const InteractionMatrix& r) {
  auto in = open_text(path);
  return parse_mask(in, r);
}

void write_mask(const std::filesystem::path& path, const FeatureSet& f, const InteractionMatrix& r) {
  auto out = open_out(path);
  for (const auto& m : f.modalities) {
    for (std::size_t i = 0; i < m.missing.size(); ++i) {
      if (m.is_missing(i)) out << r.item_ids()[i] << '\t' << m.name << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::FormatError, "write failed for '" + path.string() + "'");
}

Dataset load_dataset(const std::filesystem::path& interactions,
                     const std::vector<std::pair<std::string, std::filesystem::path>>& features,
                     const std::filesystem::path& mask) {
  Dataset ds{read_interactions(interactions), {}};
  const MaskSets sets = mask.empty() ? MaskSets{} : read_mask(mask, ds.interactions);
  for (const auto& [name, path] : features) {
    if (ds.features.find(name)) {
      throw Error(ErrorKind::ParseError, "modality '" + name + "' given twice");
    }
    FeatureMatrix values = read_feature_matrix(path);
    if (values.rows() != ds.interactions.n_items()) {
      throw Error(ErrorKind::FormatError,
                  "'" + path.string() + "' has " + std::to_string(values.rows()) +
                      " rows but the interactions list " +
                      std::to_string(ds.interactions.n_items()) + " items");
    }
    std::vector<std::uint8_t> missing(values.rows(), 0);
    if (auto it = sets.find(name); it != sets.end()) {
      for (Index i : it->second) missing[i] = 1;
    }
    ds.features.modalities.push_back(make_modality(name, std::move(values), std::move(missing)));
  }
  for (const auto& [name, items] : sets) {
    if (!ds.features.find(name)) {
      throw Error(ErrorKind::ParseError, "mask names modality '" + name + "' with no feature file");
    }
  }
  return ds;
}

}  // namespace graphimpute
