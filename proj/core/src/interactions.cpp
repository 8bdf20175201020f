#include "graphimpute/interactions.hpp"

#include <algorithm>
#include <unordered_set>

#include "graphimpute/error.hpp"

namespace graphimpute {

namespace {

std::unordered_map<std::string, Index> index_ids(const std::vector<std::string>& ids,
                                                 std::string_view what) {
  std::unordered_map<std::string, Index> lookup;
  lookup.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!lookup.emplace(ids[i], static_cast<Index>(i)).second) {
      throw Error(ErrorKind::InvalidParameter,
                  "duplicate " + std::string(what) + " id '" + ids[i] + "'");
    }
  }
  return lookup;
}

// Counting-sort style CSR with sorted rows.
void build_csr(std::size_t n_rows, std::span<const Interaction> entries, bool by_user,
               std::vector<std::size_t>& offsets, std::vector<Index>& cols) {
  offsets.assign(n_rows + 1, 0);
  for (const auto& e : entries) ++offsets[(by_user ? e.user : e.item) + 1];
  for (std::size_t r = 0; r < n_rows; ++r) offsets[r + 1] += offsets[r];
  cols.assign(entries.size(), 0);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : entries) {
    const Index row = by_user ? e.user : e.item;
    cols[cursor[row]++] = by_user ? e.item : e.user;
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(offsets[r]),
              cols.begin() + static_cast<std::ptrdiff_t>(offsets[r + 1]));
  }
}

}  // namespace

InteractionMatrix::InteractionMatrix(std::vector<std::string> user_ids,
                                     std::vector<std::string> item_ids,
                                     std::vector<Interaction> entries)
    : user_ids_(std::move(user_ids)),
      item_ids_(std::move(item_ids)),
      entries_(std::move(entries)) {
  user_lookup_ = index_ids(user_ids_, "user");
  item_lookup_ = index_ids(item_ids_, "item");

  for (const auto& e : entries_) {
    if (e.user >= user_ids_.size() || e.item >= item_ids_.size()) {
      throw Error(ErrorKind::InvalidParameter, "interaction index out of range");
    }
  }
  build_csr(user_ids_.size(), entries_, true, user_offsets_, user_items_);
  build_csr(item_ids_.size(), entries_, false, item_offsets_, item_users_);

  for (std::size_t u = 0; u < user_ids_.size(); ++u) {
    const auto row = items_of(static_cast<Index>(u));
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw Error(ErrorKind::InvalidParameter,
                  "duplicate interaction for user '" + user_ids_[u] + "'");
    }
  }
}

std::span<const Index> InteractionMatrix::items_of(Index user) const {
  return std::span<const Index>(user_items_)
      .subspan(user_offsets_[user], user_offsets_[user + 1] - user_offsets_[user]);
}

std::span<const Index> InteractionMatrix::users_of(Index item) const {
  return std::span<const Index>(item_users_)
      .subspan(item_offsets_[item], item_offsets_[item + 1] - item_offsets_[item]);
}

std::optional<Index> InteractionMatrix::find_item(std::string_view id) const {
  auto it = item_lookup_.find(std::string(id));
  if (it == item_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> InteractionMatrix::find_user(std::string_view id) const {
  auto it = user_lookup_.find(std::string(id));
  if (it == user_lookup_.end()) return std::nullopt;
  return it->second;
}

InteractionMatrix build_interaction_matrix(
    std::span<const std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorKind::EmptyDataset, "no interactions");
  }
  std::vector<std::string> users;
  std::vector<std::string> items;
  std::unordered_map<std::string, Index> user_index;
  std::unordered_map<std::string, Index> item_index;
  std::vector<Interaction> entries;
  entries.reserve(pairs.size());

  struct PairHash {
    std::size_t operator()(std::uint64_t v) const noexcept { return std::hash<std::uint64_t>{}(v); }
  };
  std::unordered_set<std::uint64_t, PairHash> seen;
  seen.reserve(pairs.size());

  auto intern = [](std::unordered_map<std::string, Index>& lookup,
                   std::vector<std::string>& ids, const std::string& id) {
    auto [it, inserted] = lookup.emplace(id, static_cast<Index>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
  };

  for (const auto& [user_id, item_id] : pairs) {
    const Index u = intern(user_index, users, user_id);
    const Index i = intern(item_index, items, item_id);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | i;
    if (seen.insert(key).second) entries.push_back({u, i});
  }
  return InteractionMatrix(std::move(users), std::move(items), std::move(entries));
}

}  // namespace graphimpute
