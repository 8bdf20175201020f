#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace graphimpute {

using Index = std::uint32_t;

struct Interaction {
  Index user = 0;
  Index item = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Binary bipartite user x item incidence. Entries keep their insertion
// order so that writing them back out and re-reading reproduces the same
// first-appearance indexing.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  // Throws Error(InvalidParameter) on duplicate ids, duplicate pairs or
  // out-of-range indices.
  InteractionMatrix(std::vector<std::string> user_ids,
                    std::vector<std::string> item_ids,
                    std::vector<Interaction> entries);

  std::size_t n_users() const noexcept { return user_ids_.size(); }
  std::size_t n_items() const noexcept { return item_ids_.size(); }
  std::size_t n_entries() const noexcept { return entries_.size(); }

  std::span<const Interaction> entries() const noexcept { return entries_; }
  const std::vector<std::string>& user_ids() const noexcept { return user_ids_; }
  const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }

  // Sorted ascending.
  std::span<const Index> items_of(Index user) const;
  std::span<const Index> users_of(Index item) const;

  std::optional<Index> find_item(std::string_view id) const;
  std::optional<Index> find_user(std::string_view id) const;

  friend bool operator==(const InteractionMatrix& a, const InteractionMatrix& b) {
    return a.user_ids_ == b.user_ids_ && a.item_ids_ == b.item_ids_ &&
           a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<Interaction> entries_;

  std::vector<std::size_t> user_offsets_;
  std::vector<Index> user_items_;
  std::vector<std::size_t> item_offsets_;
  std::vector<Index> item_users_;

  std::unordered_map<std::string, Index> user_lookup_;
  std::unordered_map<std::string, Index> item_lookup_;
};

// Indices follow first appearance of each external id; repeated pairs
// collapse. Empty input raises Error(EmptyDataset).
InteractionMatrix build_interaction_matrix(
    std::span<const std::pair<std::string, std::string>> pairs);

}  // namespace graphimpute
