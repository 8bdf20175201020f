#include "graphimpute/config.hpp"

#include <array>
#include <string>
#include <utility>

#include "graphimpute/error.hpp"

namespace graphimpute {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 6> kMethods{{
    {Method::Zeros, "zeros"},
    {Method::Random, "random"},
    {Method::GlobalMean, "global-mean"},
    {Method::NeighMean, "neigh-mean"},
    {Method::MultiHop, "multihop"},
    {Method::PersPageRank, "pers-pagerank"},
}};

template <typename Enum, std::size_t N>
Enum lookup(const std::array<std::pair<Enum, std::string_view>, N>& table,
            std::string_view name, std::string_view what) {
  for (const auto& [value, spelling] : table) {
    if (spelling == name) return value;
  }
  throw Error(ErrorKind::InvalidParameter,
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

}  // namespace

void ImputeConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
  if (top_k < 1) fail("top_k must be >= 1");
  if (hops < 1) fail("hops must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (!(iter_tolerance > 0.0)) fail("iter_tolerance must be > 0");
  if (max_steps < 1) fail("max_steps must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
}

bool uses_graph(Method m) noexcept {
  return m == Method::NeighMean || m == Method::MultiHop || m == Method::PersPageRank;
}

bool uses_hops(Method m) noexcept {
  return m == Method::MultiHop || m == Method::PersPageRank;
}

std::string_view to_string(Method m) noexcept {
  for (const auto& [value, spelling] : kMethods) {
    if (value == m) return spelling;
  }
  return "unknown";
}

std::string_view to_string(PprMode m) noexcept {
  return m == PprMode::Exact ? "exact" : "iterative";
}

std::string_view to_string(ColdFallback m) noexcept {
  return m == ColdFallback::Zeros ? "zeros" : "global-mean";
}

std::string_view to_string(NeighborPolicy m) noexcept {
  return m == NeighborPolicy::ZeroPlaceholder ? "zero-placeholder" : "observed-only";
}

Method parse_method(std::string_view name) { return lookup(kMethods, name, "method"); }

PprMode parse_ppr_mode(std::string_view name) {
  constexpr std::array<std::pair<PprMode, std::string_view>, 2> table{{
      {PprMode::Exact, "exact"}, {PprMode::Iterative, "iterative"}}};
  return lookup(table, name, "ppr mode");
}

ColdFallback parse_fallback(std::string_view name) {
  constexpr std::array<std::pair<ColdFallback, std::string_view>, 2> table{{
      {ColdFallback::Zeros, "zeros"}, {ColdFallback::GlobalMean, "global-mean"}}};
  return lookup(table, name, "fallback");
}

NeighborPolicy parse_neighbor_policy(std::string_view name) {
  constexpr std::array<std::pair<NeighborPolicy, std::string_view>, 2> table{{
      {NeighborPolicy::ZeroPlaceholder, "zero-placeholder"},
      {NeighborPolicy::ObservedOnly, "observed-only"}}};
  return lookup(table, name, "neighbor policy");
}

}  // namespace graphimpute

#include <charconv>

namespace graphimpute {

std::vector<std::size_t> parse_grid(std::string_view spec) {
  auto bad = [&] {
    return Error(ErrorKind::InvalidParameter, "bad grid '" + std::string(spec) +
                                                  "', expected start:stop:step");
  };
  std::vector<std::size_t> parts;
  std::size_t pos = 0;
  while (true) {
    const auto colon = spec.find(':', pos);
    const auto field = spec.substr(pos, colon == std::string_view::npos ? spec.size() - pos
                                                                        : colon - pos);
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) throw bad();
    parts.push_back(v);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) throw bad();
  std::vector<std::size_t> grid;
  for (std::size_t v = parts[0]; v <= parts[1]; v += parts[2]) grid.push_back(v);
  return grid;
}

}  // namespace graphimpute
