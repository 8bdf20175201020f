#include "graphimpute/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "graphimpute/error.hpp"

namespace graphimpute {

DatasetStats dataset_stats(const InteractionMatrix& r, const FeatureSet& f) {
  DatasetStats s;
  s.n_users = r.n_users();
  s.n_items = r.n_items();
  s.n_interactions = r.n_entries();
  for (const auto& m : f.modalities) s.missing[m.name] = m.missing_count();
  return s;
}

DropResult drop_missing(const InteractionMatrix& r, const FeatureSet& f) {
  const std::size_t n_items = r.n_items();
  for (const auto& m : f.modalities) {
    if (m.values.rows() != n_items) {
      throw Error(ErrorKind::InvalidParameter,
                  "modality '" + m.name + "' row count does not match the interactions");
    }
  }

  std::vector<std::uint8_t> drop(n_items, 0);
  for (const auto& m : f.modalities) {
    for (std::size_t i = 0; i < n_items; ++i) drop[i] |= m.missing[i] != 0;
  }

  constexpr Index kGone = static_cast<Index>(-1);
  std::vector<Index> item_map(n_items, kGone);
  std::vector<Index> kept_items;
  for (std::size_t i = 0; i < n_items; ++i) {
    if (!drop[i]) {
      item_map[i] = static_cast<Index>(kept_items.size());
      kept_items.push_back(static_cast<Index>(i));
    }
  }
  if (kept_items.empty()) {
    throw Error(ErrorKind::EmptyDataset, "every item misses at least one modality");
  }

  // Users survive iff they keep an interaction; first-appearance order over
  // the surviving entries equals original relative order.
  std::vector<Index> user_map(r.n_users(), kGone);
  std::vector<std::string> users;
  std::vector<Interaction> entries;
  for (const auto& e : r.entries()) {
    if (item_map[e.item] == kGone) continue;
    if (user_map[e.user] == kGone) {
      user_map[e.user] = static_cast<Index>(users.size());
      users.push_back(r.user_ids()[e.user]);
    }
    entries.push_back({user_map[e.user], item_map[e.item]});
  }
  if (entries.empty()) {
    throw Error(ErrorKind::EmptyDataset, "no interactions survive dropping");
  }
  // Re-reading a written file indexes items by first appearance, which must
  // agree with the dense order used for the feature rows.
  std::vector<std::string> items;
  items.reserve(kept_items.size());
  for (Index i : kept_items) items.push_back(r.item_ids()[i]);

  FeatureSet features;
  for (const auto& m : f.modalities) {
    FeatureMatrix values(kept_items.size(), m.values.cols());
    std::vector<std::uint8_t> imputed(kept_items.size(), 0);
    for (std::size_t k = 0; k < kept_items.size(); ++k) {
      std::ranges::copy(m.values.row(kept_items[k]), values.row(k).begin());
      imputed[k] = m.imputed[kept_items[k]];
    }
    features.modalities.push_back(Modality{m.name, std::move(values),
                                           std::vector<std::uint8_t>(kept_items.size(), 0),
                                           std::move(imputed)});
  }

  DropResult out{InteractionMatrix(std::move(users), std::move(items), std::move(entries)),
                 std::move(features), dataset_stats(r, f), {}, std::move(kept_items)};
  out.after = dataset_stats(out.interactions, out.features);
  return out;
}

MaskResult mask_features(const FeatureSet& f, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "hide fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  MaskResult out;
  out.masked = f;
  for (auto& m : out.masked.modalities) {
    std::vector<Index> observed;
    for (std::size_t i = 0; i < m.missing.size(); ++i) {
      if (!m.is_missing(i)) observed.push_back(static_cast<Index>(i));
    }
    const auto count =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(observed.size())));
    if (count == 0) {
      throw Error(ErrorKind::InvalidParameter,
                  "hide fraction selects no rows in modality '" + m.name + "'");
    }
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < count; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, observed.size() - 1);
      std::swap(observed[k], observed[pick(rng)]);
    }
    std::vector<Index> chosen(observed.begin(), observed.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(chosen.begin(), chosen.end());

    HiddenRows hidden{m.name, chosen, FeatureMatrix(count, m.values.cols())};
    for (std::size_t k = 0; k < count; ++k) {
      auto row = m.values.row(chosen[k]);
      std::ranges::copy(row, hidden.truth.row(k).begin());
      std::ranges::fill(row, 0.0);
      m.missing[chosen[k]] = 1;
    }
    out.hidden.push_back(std::move(hidden));
  }
  return out;
}

EvalReport reconstruction_metrics(const FeatureSet& imputed, const std::vector<HiddenRows>& truth) {
  EvalReport report;
  for (const auto& h : truth) {
    const Modality* m = imputed.find(h.modality);
    if (!m) {
      throw Error(ErrorKind::InvalidParameter, "no imputed modality '" + h.modality + "'");
    }
    if (h.truth.rows() != h.items.size() || h.truth.cols() != m->values.cols()) {
      throw Error(ErrorKind::InvalidParameter, "hidden rows do not match modality shape");
    }
    ModalityMetrics mm;
    mm.modality = h.modality;
    mm.n_evaluated = h.items.size();
    double sq_err = 0.0;
    double cos_sum = 0.0;
    for (std::size_t k = 0; k < h.items.size(); ++k) {
      const auto got = m->values.row(h.items[k]);
      const auto want = h.truth.row(k);
      double dot = 0.0, n_got = 0.0, n_want = 0.0;
      for (std::size_t c = 0; c < got.size(); ++c) {
        const double d = got[c] - want[c];
        sq_err += d * d;
        dot += got[c] * want[c];
        n_got += got[c] * got[c];
        n_want += want[c] * want[c];
      }
      if (n_got > 0.0 && n_want > 0.0) {
        cos_sum += dot / (std::sqrt(n_got) * std::sqrt(n_want));
        ++mm.n_cosine;
      } else {
        ++mm.n_cosine_excluded;
      }
    }
    const double cells = static_cast<double>(h.items.size() * h.truth.cols());
    mm.rmse = cells > 0 ? std::sqrt(sq_err / cells) : 0.0;
    mm.mean_cosine = mm.n_cosine > 0 ? cos_sum / static_cast<double>(mm.n_cosine) : 0.0;
    report.modalities.push_back(std::move(mm));
  }
  return report;
}

SynthDataset synth_generate(const SynthParams& p) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidParameter, msg); };
  if (p.n_communities < 1) fail("need at least one community");
  if (p.n_users < 1 || p.n_items < 1) fail("need at least one user and one item");
  if (p.n_users < p.n_communities || p.n_items < p.n_communities) {
    fail("every community needs at least one user and one item");
  }
  if (!(p.p_out >= 0.0 && p.p_out < p.p_in && p.p_in <= 1.0)) {
    fail("need 0 <= p_out < p_in <= 1");
  }
  if (!(p.noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  if (p.modalities.empty()) fail("need at least one modality");
  for (const auto& m : p.modalities) {
    if (m.dim == 0) fail("modality '" + m.name + "' has zero dimension");
  }

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t c = p.n_communities;

  std::vector<std::vector<std::size_t>> user_items(p.n_users);
  std::vector<std::uint8_t> item_seen(p.n_items, 0);
  for (std::size_t u = 0; u < p.n_users; ++u) {
    for (std::size_t i = 0; i < p.n_items; ++i) {
      const double prob = (u % c == i % c) ? p.p_in : p.p_out;
      if (unit(rng) < prob) {
        user_items[u].push_back(i);
        item_seen[i] = 1;
      }
    }
  }
  // Same-community repairs for users and items without any interaction.
  const std::size_t users_per = p.n_users / c;
  const std::size_t items_per = p.n_items / c;
  for (std::size_t u = 0; u < p.n_users; ++u) {
    if (!user_items[u].empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, items_per - 1);
    const std::size_t i = (u % c) + c * pick(rng);
    user_items[u].push_back(i);
    item_seen[i] = 1;
  }
  for (std::size_t i = 0; i < p.n_items; ++i) {
    if (item_seen[i]) continue;
    std::uniform_int_distribution<std::size_t> pick(0, users_per - 1);
    const std::size_t u = (i % c) + c * pick(rng);
    user_items[u].insert(std::upper_bound(user_items[u].begin(), user_items[u].end(), i), i);
    item_seen[i] = 1;
  }

  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t u = 0; u < p.n_users; ++u) {
    for (std::size_t i : user_items[u]) {
      pairs.emplace_back("u" + std::to_string(u), "i" + std::to_string(i));
    }
  }
  InteractionMatrix r = build_interaction_matrix(pairs);

  // Generated item number of each index (ids are "i<number>").
  std::vector<std::size_t> origin(r.n_items());
  for (std::size_t k = 0; k < r.n_items(); ++k) origin[k] = std::stoul(r.item_ids()[k].substr(1));

  std::vector<std::size_t> community(r.n_items());
  for (std::size_t k = 0; k < r.n_items(); ++k) community[k] = origin[k] % c;

  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureSet features;
  for (const auto& spec : p.modalities) {
    FeatureMatrix centroids(c, spec.dim);
    for (double& v : centroids.data()) v = normal(rng);
    // Noise drawn in generated-item order, independent of index relabeling.
    FeatureMatrix by_origin(p.n_items, spec.dim);
    for (std::size_t i = 0; i < p.n_items; ++i) {
      const auto centre = centroids.row(i % c);
      auto dst = by_origin.row(i);
      for (std::size_t d = 0; d < spec.dim; ++d) {
        const double noise = p.noise_sigma > 0.0 ? p.noise_sigma * normal(rng) : 0.0;
        dst[d] = centre[d] + noise;
      }
    }
    FeatureMatrix values(r.n_items(), spec.dim);
    for (std::size_t k = 0; k < r.n_items(); ++k) {
      std::ranges::copy(by_origin.row(origin[k]), values.row(k).begin());
    }
    features.modalities.push_back(make_modality(spec.name, std::move(values), {}));
  }
  return SynthDataset{std::move(r), std::move(features), std::move(community)};
}

}  // namespace graphimpute

#include <atomic>
#include <mutex>
#include <chrono>
#include <thread>

#include "graphimpute/imputers.hpp"
#include "graphimpute/item_graph.hpp"

namespace graphimpute {

std::vector<ImputeConfig> expand_sweep(const SweepConfig& sweep) {
  if (sweep.methods.empty()) throw Error(ErrorKind::InvalidParameter, "no methods to sweep");
  if (sweep.top_k_grid.empty() || sweep.hops_grid.empty()) {
    throw Error(ErrorKind::InvalidParameter, "empty sweep grid");
  }
  std::vector<ImputeConfig> configs;
  for (Method m : sweep.methods) {
    const std::vector<std::size_t> ks = uses_graph(m) ? sweep.top_k_grid
                                                      : std::vector<std::size_t>{sweep.base.top_k};
    const std::vector<std::size_t> ts = uses_hops(m) ? sweep.hops_grid
                                                     : std::vector<std::size_t>{sweep.base.hops};
    for (std::size_t k : ks) {
      for (std::size_t t : ts) {
        ImputeConfig cfg = sweep.base;
        cfg.method = m;
        cfg.top_k = k;
        cfg.hops = t;
        cfg.threads = 1;
        cfg.validate();
        configs.push_back(cfg);
      }
    }
  }
  return configs;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t index) noexcept {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<SweepRow> run_sweep(const InteractionMatrix& r, const FeatureSet& f,
                                const SweepConfig& sweep) {
  auto configs = expand_sweep(sweep);
  const MaskResult masked = mask_features(f, sweep.hide_fraction, sweep.seed);
  const ItemGraph counts = cooccurrence(r);

  std::vector<SweepRow> rows(configs.size());
  auto run = [&](std::size_t k) {
    SweepRow& row = rows[k];
    row.index = k;
    row.config = configs[k];
    row.config.seed = derive_seed(sweep.seed, k);
    const auto start = std::chrono::steady_clock::now();
    try {
      auto [imputed, report] = impute(masked.masked, counts, row.config);
      row.metrics = reconstruction_metrics(imputed, masked.hidden);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularDiffusion && e.kind() != ErrorKind::DivergentDiffusion &&
          e.kind() != ErrorKind::GraphTooLarge) {
        throw;
      }
      row.error = e.kind();
      row.error_message = e.what();
    }
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(sweep.threads, rows.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) run(k);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < rows.size(); k = next++) {
        try {
          run(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace graphimpute
