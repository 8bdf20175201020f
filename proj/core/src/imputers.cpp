#include "graphimpute/imputers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "graphimpute/error.hpp"

namespace graphimpute {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Sums in ascending value order; the result depends only on the multiset.
double ordered_sum(std::span<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

void check_rows(const FeatureSet& f, std::size_t n_items) {
  for (const auto& m : f.modalities) {
    if (m.values.rows() != n_items) {
      throw Error(ErrorKind::InvalidParameter,
                  "modality '" + m.name + "' has " + std::to_string(m.values.rows()) +
                      " rows but the graph has " + std::to_string(n_items) + " items");
    }
  }
}

// Output modality: observed rows restored from the input, missing rows taken
// from `values`, flags updated.
Modality finish(const Modality& in, FeatureMatrix values) {
  Modality out{in.name, std::move(values), std::vector<std::uint8_t>(in.missing.size(), 0),
               in.imputed};
  for (std::size_t i = 0; i < in.missing.size(); ++i) {
    if (in.is_missing(i)) {
      out.imputed[i] = 1;
    } else {
      std::ranges::copy(in.values.row(i), out.values.row(i).begin());
    }
  }
  return out;
}

void fill_cold(const Modality& in, FeatureMatrix& values, std::span<const std::uint8_t> cold,
               ColdFallback fallback) {
  std::vector<double> fill;
  for (std::size_t i = 0; i < cold.size(); ++i) {
    if (!cold[i]) continue;
    if (fallback == ColdFallback::Zeros) {
      std::ranges::fill(values.row(i), 0.0);
    } else {
      if (fill.empty()) fill = observed_mean(in);
      std::ranges::copy(fill, values.row(i).begin());
    }
  }
}

std::size_t count_flags(std::span<const std::uint8_t> flags) {
  return static_cast<std::size_t>(std::ranges::count_if(flags, [](auto v) { return v != 0; }));
}

// Masked rows with an empty operator row.
std::vector<std::uint8_t> cold_rows(const Modality& m, const NormalizedOperator& op) {
  std::vector<std::uint8_t> cold(m.missing.size(), 0);
  for (std::size_t i = 0; i < cold.size(); ++i) cold[i] = m.is_missing(i) && op.degree(i) == 0;
  return cold;
}

// Sparse row i of `op` applied to `x`, written into `dst`.
void apply_row(const SparseOperator& op, std::size_t i, const FeatureMatrix& x,
               std::span<double> dst, std::vector<double>& terms) {
  const auto cols = op.columns_of(i);
  const auto vals = op.values_of(i);
  terms.resize(cols.size());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t p = 0; p < cols.size(); ++p) terms[p] = vals[p] * x.at(cols[p], c);
    dst[c] = ordered_sum(terms);
  }
}

Modality zeros_modality(const Modality& in) {
  FeatureMatrix values = in.values;
  for (std::size_t i = 0; i < in.missing.size(); ++i) {
    if (in.is_missing(i)) std::ranges::fill(values.row(i), 0.0);
  }
  return finish(in, std::move(values));
}

Modality global_mean_modality(const Modality& in) {
  FeatureMatrix values = in.values;
  if (in.missing_count() > 0) {
    const auto mean = observed_mean(in);
    for (std::size_t i = 0; i < in.missing.size(); ++i) {
      if (in.is_missing(i)) std::ranges::copy(mean, values.row(i).begin());
    }
  }
  return finish(in, std::move(values));
}

Modality neigh_mean_modality(const Modality& in, const ItemGraph& g, ColdFallback fallback,
                             NeighborPolicy policy, ModalityRunStats& stats) {
  FeatureMatrix values = in.values;
  std::vector<std::uint8_t> cold(in.missing.size(), 0);
  std::vector<double> terms;
  std::vector<Index> used;
  for (std::size_t i = 0; i < in.missing.size(); ++i) {
    if (!in.is_missing(i)) continue;
    used.clear();
    for (Index j : g.neighbors(static_cast<Index>(i))) {
      if (policy == NeighborPolicy::ZeroPlaceholder || !in.is_missing(j)) used.push_back(j);
    }
    if (used.empty()) {
      cold[i] = 1;
      continue;
    }
    const double denom = static_cast<double>(used.size());
    terms.resize(used.size());
    auto dst = values.row(i);
    for (std::size_t c = 0; c < values.cols(); ++c) {
      for (std::size_t p = 0; p < used.size(); ++p) terms[p] = in.values.at(used[p], c);
      dst[c] = ordered_sum(terms) / denom;
    }
  }
  fill_cold(in, values, cold, fallback);
  stats.cold_rows = count_flags(cold);
  stats.hops = 1;
  return finish(in, std::move(values));
}

Modality multihop_modality(const Modality& in, const NormalizedOperator& op, std::size_t hops,
                           ColdFallback fallback, const IterationObserver& observer,
                           ModalityRunStats& stats) {
  const SparseOperator& a = op.sparse();
  FeatureMatrix current = in.values;
  FeatureMatrix next = current;
  std::vector<double> terms;
  for (std::size_t t = 1; t <= hops; ++t) {
    // Observed rows of `next` already hold their originals (clamped).
    for (std::size_t i = 0; i < in.missing.size(); ++i) {
      if (in.is_missing(i)) apply_row(a, i, current, next.row(i), terms);
    }
    std::swap(current, next);
    if (observer) observer(in.name, t, current);
  }
  const auto cold = cold_rows(in, op);
  fill_cold(in, current, cold, fallback);
  stats.cold_rows = count_flags(cold);
  stats.hops = hops;
  return finish(in, std::move(current));
}

void ppr_exact_hop(const Modality& in, const NormalizedOperator& op, bool clamp,
                   const FeatureMatrix& current, FeatureMatrix& next) {
  const std::size_t n = op.n_items();
  const std::size_t dim = current.cols();
  const auto dense = op.dense();
  for (std::size_t i = 0; i < n; ++i) {
    if (clamp && !in.is_missing(i)) continue;
    auto dst = next.row(i);
    std::ranges::fill(dst, 0.0);
    const double* prow = dense.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = prow[j];
      if (p == 0.0) continue;
      const auto src = current.row(j);
      for (std::size_t c = 0; c < dim; ++c) dst[c] += p * src[c];
    }
  }
}

// One application of alpha B^-1 as the fixed point of
// G = alpha F + (1 - alpha) A_sl G.
void ppr_iterative_hop(const Modality& in, const NormalizedOperator& op, const PprOptions& opts,
                       bool clamp, std::size_t hop, const FeatureMatrix& current,
                       FeatureMatrix& next, ModalityRunStats& stats) {
  const SparseOperator& a = op.sparse();
  const double alpha = op.alpha();
  const double damp = 1.0 - alpha;
  const std::size_t n = op.n_items();

  FeatureMatrix g(current.rows(), current.cols());
  for (std::size_t k = 0; k < g.data().size(); ++k) g.data()[k] = alpha * current.data()[k];
  FeatureMatrix g_next = g;
  std::vector<double> terms;
  std::vector<double> acc(current.cols());

  double residual = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  while (steps < opts.max_steps) {
    ++steps;
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      apply_row(a, i, g, acc, terms);
      const auto f_in = current.row(i);
      const auto old = g.row(i);
      auto dst = g_next.row(i);
      for (std::size_t c = 0; c < acc.size(); ++c) {
        dst[c] = alpha * f_in[c] + damp * acc[c];
        residual = std::max(residual, std::abs(dst[c] - old[c]));
      }
    }
    std::swap(g, g_next);
    if (!std::isfinite(residual)) break;
    if (residual < opts.iter_tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "personalized PageRank fixed point did not converge at alpha = " << alpha << " (hop "
        << hop << ", " << steps << " steps, residual " << residual << ")";
    throw Error(ErrorKind::DivergentDiffusion, msg.str());
  }
  stats.inner_steps.push_back(steps);
  stats.residuals.push_back(residual);

  for (std::size_t i = 0; i < n; ++i) {
    if (clamp && !in.is_missing(i)) continue;
    std::ranges::copy(g.row(i), next.row(i).begin());
  }
}

Modality ppr_modality(const Modality& in, const NormalizedOperator& op, const PprOptions& opts,
                      const IterationObserver& observer, ModalityRunStats& stats) {
  FeatureMatrix current = in.values;
  FeatureMatrix next = current;
  for (std::size_t t = 1; t <= opts.hops; ++t) {
    if (op.mode() == OperatorMode::PprExact) {
      ppr_exact_hop(in, op, opts.clamp, current, next);
    } else {
      ppr_iterative_hop(in, op, opts, opts.clamp, t, current, next, stats);
    }
    std::swap(current, next);
    if (observer) observer(in.name, t, current);
  }
  const auto cold = cold_rows(in, op);
  fill_cold(in, current, cold, opts.cold_fallback);
  stats.cold_rows = count_flags(cold);
  stats.hops = opts.hops;
  return finish(in, std::move(current));
}

ModalityRunStats make_stats(const Modality& m) {
  ModalityRunStats s;
  s.modality = m.name;
  s.imputed_rows = m.missing_count();
  return s;
}

void record(DiffusionTrace* trace, ModalityRunStats stats) {
  if (trace) trace->stats.push_back(std::move(stats));
}

}  // namespace

std::vector<double> observed_mean(const Modality& m) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.missing.size(); ++i) {
    if (!m.is_missing(i)) rows.push_back(i);
  }
  if (rows.empty()) {
    throw Error(ErrorKind::NoObservedFeatures,
                "modality '" + m.name + "' has no observed feature vectors");
  }
  std::vector<double> mean(m.values.cols());
  std::vector<double> column(rows.size());
  for (std::size_t c = 0; c < mean.size(); ++c) {
    for (std::size_t p = 0; p < rows.size(); ++p) column[p] = m.values.at(rows[p], c);
    mean[c] = ordered_sum(column) / static_cast<double>(rows.size());
  }
  return mean;
}

FeatureSet impute_zeros(const FeatureSet& f) {
  FeatureSet out;
  for (const auto& m : f.modalities) out.modalities.push_back(zeros_modality(m));
  return out;
}

FeatureSet impute_random(const FeatureSet& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FeatureSet out;
  for (const auto& m : f.modalities) {
    FeatureMatrix values = m.values;
    for (std::size_t i = 0; i < m.missing.size(); ++i) {
      if (!m.is_missing(i)) continue;
      // 53 high bits scaled by 2^-53: uniform on [0, 1), never 1.
      for (double& v : values.row(i)) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    out.modalities.push_back(finish(m, std::move(values)));
  }
  return out;
}

FeatureSet impute_global_mean(const FeatureSet& f) {
  FeatureSet out;
  for (const auto& m : f.modalities) out.modalities.push_back(global_mean_modality(m));
  return out;
}

FeatureSet impute_neigh_mean(const FeatureSet& f, const ItemGraph& g, ColdFallback fallback,
                             NeighborPolicy policy) {
  check_rows(f, g.n_items());
  FeatureSet out;
  for (const auto& m : f.modalities) {
    ModalityRunStats stats = make_stats(m);
    out.modalities.push_back(neigh_mean_modality(m, g, fallback, policy, stats));
  }
  return out;
}

FeatureSet impute_multihop(const FeatureSet& f, const NormalizedOperator& op, std::size_t hops,
                           ColdFallback fallback, DiffusionTrace* trace) {
  if (op.mode() != OperatorMode::SymLaplacian) {
    throw Error(ErrorKind::InvalidParameter, "multihop needs a SymLaplacian operator");
  }
  if (hops < 1) throw Error(ErrorKind::InvalidParameter, "hops must be >= 1");
  check_rows(f, op.n_items());
  FeatureSet out;
  const IterationObserver none;
  for (const auto& m : f.modalities) {
    ModalityRunStats stats = make_stats(m);
    out.modalities.push_back(
        multihop_modality(m, op, hops, fallback, trace ? trace->on_iteration : none, stats));
    record(trace, std::move(stats));
  }
  return out;
}

FeatureSet impute_pers_pagerank(const FeatureSet& f, const NormalizedOperator& op,
                                const PprOptions& opts, DiffusionTrace* trace) {
  if (op.mode() == OperatorMode::SymLaplacian) {
    throw Error(ErrorKind::InvalidParameter,
                "personalized PageRank needs a PprExact or PprIterative operator");
  }
  if (opts.hops < 1) throw Error(ErrorKind::InvalidParameter, "hops must be >= 1");
  if (!(opts.iter_tolerance > 0.0) || opts.max_steps < 1) {
    throw Error(ErrorKind::InvalidParameter, "iteration tolerance and step cap must be positive");
  }
  check_rows(f, op.n_items());
  FeatureSet out;
  const IterationObserver none;
  for (const auto& m : f.modalities) {
    ModalityRunStats stats = make_stats(m);
    out.modalities.push_back(ppr_modality(m, op, opts, trace ? trace->on_iteration : none, stats));
    record(trace, std::move(stats));
  }
  return out;
}

FeatureSet impute_pers_pagerank(const FeatureSet& f, const ItemGraph& g, const PprOptions& opts,
                                DiffusionTrace* trace) {
  const NormalizedOperator op = opts.mode == PprMode::Exact
                                    ? ppr_exact(g, opts.alpha, opts.exact_cap)
                                    : self_loop_adjacency(g, opts.alpha);
  return impute_pers_pagerank(f, op, opts, trace);
}

PprOptions ppr_options(const ImputeConfig& cfg) {
  PprOptions o;
  o.alpha = cfg.alpha;
  o.hops = cfg.hops;
  o.mode = cfg.ppr_mode;
  o.iter_tolerance = cfg.iter_tolerance;
  o.max_steps = cfg.max_steps;
  o.exact_cap = cfg.exact_cap;
  o.clamp = cfg.clamp;
  o.cold_fallback = cfg.cold_fallback;
  return o;
}

std::pair<FeatureSet, ImputationRunReport> impute(const FeatureSet& f, const InteractionMatrix& r,
                                                  const ImputeConfig& cfg) {
  cfg.validate();
  check_rows(f, r.n_items());
  const auto start = Clock::now();
  ItemGraph counts = uses_graph(cfg.method) ? cooccurrence(r)
                                            : ItemGraph(r.n_items(), GraphKind::Counts,
                                                        std::vector<std::size_t>(r.n_items() + 1, 0),
                                                        {}, {});
  const double build_ms = elapsed_ms(start);
  auto result = impute(f, counts, cfg);
  result.second.graph_time_ms += build_ms;
  result.second.wall_time_ms += build_ms;
  return result;
}

std::pair<FeatureSet, ImputationRunReport> impute(const FeatureSet& f, const ItemGraph& counts,
                                                  const ImputeConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  ImputationRunReport report;
  report.config = cfg;

  if (!uses_graph(cfg.method)) {
    FeatureSet out;
    switch (cfg.method) {
      case Method::Zeros: out = impute_zeros(f); break;
      case Method::Random: out = impute_random(f, cfg.seed); break;
      default: out = impute_global_mean(f); break;
    }
    for (const auto& m : f.modalities) report.modalities.push_back(make_stats(m));
    report.wall_time_ms = elapsed_ms(start);
    return {std::move(out), std::move(report)};
  }

  check_rows(f, counts.n_items());
  const ItemGraph g = topk_sparsify(counts, cfg.top_k);
  report.graph_edges = g.n_edges();
  for (std::size_t i = 0; i < g.n_items(); ++i) report.cold_items += g.degree(static_cast<Index>(i)) == 0;

  std::optional<NormalizedOperator> op;
  const PprOptions ppr = ppr_options(cfg);
  if (cfg.method == Method::MultiHop) {
    op = sym_norm_adjacency(g);
  } else if (cfg.method == Method::PersPageRank) {
    op = cfg.ppr_mode == PprMode::Exact ? ppr_exact(g, cfg.alpha, cfg.exact_cap)
                                        : self_loop_adjacency(g, cfg.alpha);
  }
  report.graph_time_ms = elapsed_ms(start);

  auto run_one = [&](const Modality& m) {
    ModalityRunStats stats = make_stats(m);
    Modality result;
    switch (cfg.method) {
      case Method::NeighMean:
        result = neigh_mean_modality(m, g, cfg.cold_fallback, cfg.neighbor_policy, stats);
        break;
      case Method::MultiHop:
        result = multihop_modality(m, *op, cfg.hops, cfg.cold_fallback, {}, stats);
        break;
      default: result = ppr_modality(m, *op, ppr, {}, stats); break;
    }
    return std::make_pair(std::move(result), std::move(stats));
  };

  const std::size_t n_mod = f.modalities.size();
  std::vector<std::pair<Modality, ModalityRunStats>> results(n_mod);
  if (cfg.threads > 1 && n_mod > 1) {
    // Modalities are independent; collect in order so output is unaffected.
    std::vector<std::future<std::pair<Modality, ModalityRunStats>>> pending;
    std::size_t next = 0;
    while (next < n_mod || !pending.empty()) {
      while (next < n_mod && pending.size() < cfg.threads) {
        pending.push_back(std::async(std::launch::async, run_one, std::cref(f.modalities[next])));
        ++next;
      }
      const std::size_t first = next - pending.size();
      results[first] = pending.front().get();
      pending.erase(pending.begin());
    }
  } else {
    for (std::size_t k = 0; k < n_mod; ++k) results[k] = run_one(f.modalities[k]);
  }

  FeatureSet out;
  for (auto& [m, stats] : results) {
    out.modalities.push_back(std::move(m));
    report.modalities.push_back(std::move(stats));
  }
  report.wall_time_ms = elapsed_ms(start);
  return {std::move(out), std::move(report)};
}

}  // namespace graphimpute
