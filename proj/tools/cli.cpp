#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "graphimpute/graphimpute.hpp"

namespace graphimpute::cli {

namespace fs = std::filesystem;

namespace {

using FeatureArgs = std::vector<std::pair<std::string, fs::path>>;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::pair<std::string, std::string> split_assignment(const std::string& arg, std::string_view flag) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(flag) + " expects name=value, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

FeatureArgs parse_features(const std::vector<std::string>& raw) {
  FeatureArgs out;
  for (const auto& arg : raw) {
    for (const auto& piece : split(arg, ',')) {
      auto [name, path] = split_assignment(piece, "--features");
      out.emplace_back(name, fs::path(path));
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidParameter, "--features needs at least one modality");
  return out;
}

std::vector<ModalitySpec> parse_dims(const std::string& raw) {
  std::vector<ModalitySpec> out;
  for (const auto& piece : split(raw, ',')) {
    auto [name, value] = split_assignment(piece, "--dims");
    std::size_t dim = 0;
    try {
      std::size_t used = 0;
      dim = std::stoul(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParameter, "bad dimension '" + value + "' in --dims");
    }
    out.push_back({name, dim});
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorKind::FormatError, "write failed for '" + path.string() + "'");
}

void write_features(const fs::path& dir, const FeatureSet& f) {
  for (const auto& m : f.modalities) write_feature_matrix(dir / (m.name + ".fmat"), m.values);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::FormatError, "cannot create '" + dir.string() + "': " + ec.message());
}

// Data-level checks shared by every subcommand that loads a dataset.
Dataset load_checked(const std::string& interactions, const std::vector<std::string>& features,
                     const std::string& mask) {
  Dataset ds = load_dataset(interactions, parse_features(features), mask);
  const auto report = validate(ds.features, ds.interactions);
  if (!report.ok) {
    const auto& v = report.violations.front();
    std::string where = v.item ? " (item " + ds.interactions.item_ids()[*v.item] + ")" : "";
    throw Error(ErrorKind::FormatError, "modality '" + v.modality + "': " + v.what + where);
  }
  return ds;
}

struct DatasetArgs {
  std::string interactions;
  std::vector<std::string> features;
  std::string mask;

  void attach(CLI::App* app, bool mask_flag = true) {
    app->add_option("--interactions", interactions, "user<TAB>item interaction file")->required();
    app->add_option("--features", features, "modality=PATH feature files (.fmat)")
        ->required()
        ->expected(1, -1);
    if (mask_flag) app->add_option("--mask", mask, "item<TAB>modality missing-feature list");
  }
};

struct ImputeArgs {
  std::string method = "zeros";
  std::string ppr_mode{to_string(ImputeConfig{}.ppr_mode)};
  std::string fallback{to_string(ImputeConfig{}.cold_fallback)};
  std::string neighbor_policy{to_string(ImputeConfig{}.neighbor_policy)};
  ImputeConfig cfg;
  bool no_clamp = false;

  void attach(CLI::App* app) {
    app->add_option("--top-k", cfg.top_k, "neighbors kept per item when sparsifying")
        ->capture_default_str();
    app->add_option("--hops", cfg.hops, "propagation hops T")->capture_default_str();
    app->add_option("--alpha", cfg.alpha, "teleport probability")->capture_default_str();
    app->add_option("--seed", cfg.seed, "seed for random imputation")->capture_default_str();
    app->add_option("--ppr-mode", ppr_mode, "exact | iterative")->capture_default_str();
    app->add_option("--fallback", fallback, "cold-item fallback: zeros | global-mean")
        ->capture_default_str();
    app->add_option("--neighbor-policy", neighbor_policy,
                    "neigh-mean: zero-placeholder | observed-only")
        ->capture_default_str();
    app->add_option("--tolerance", cfg.iter_tolerance, "iterative PPR residual tolerance")
        ->capture_default_str();
    app->add_option("--max-steps", cfg.max_steps, "iterative PPR step cap")->capture_default_str();
    app->add_option("--exact-cap", cfg.exact_cap, "max items for exact PPR")->capture_default_str();
    app->add_flag("--no-clamp", no_clamp, "do not reset observed rows between PPR hops");
    app->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  }

  ImputeConfig resolve() const {
    ImputeConfig out = cfg;
    out.method = parse_method(method);
    out.ppr_mode = parse_ppr_mode(ppr_mode);
    out.cold_fallback = parse_fallback(fallback);
    out.neighbor_policy = parse_neighbor_policy(neighbor_policy);
    out.clamp = !no_clamp;
    out.validate();
    return out;
  }
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::GraphTooLarge:
      return kExitUsage;
    case ErrorKind::SingularDiffusion:
    case ErrorKind::DivergentDiffusion:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graph-aware imputation of missing item features"};
  app.require_subcommand(1);

  // impute
  DatasetArgs impute_data;
  ImputeArgs impute_args;
  std::string impute_out;
  auto* impute_cmd = app.add_subcommand("impute", "fill missing feature vectors");
  impute_data.attach(impute_cmd);
  impute_cmd->add_option("--method", impute_args.method,
                         "zeros | random | global-mean | neigh-mean | multihop | pers-pagerank")
      ->required();
  impute_args.attach(impute_cmd);
  impute_cmd->add_option("--out", impute_out, "output directory")->required();

  // drop
  DatasetArgs drop_data;
  std::string drop_out;
  auto* drop_cmd = app.add_subcommand("drop", "remove items with any missing modality");
  drop_data.attach(drop_cmd);
  drop_cmd->add_option("--out", drop_out, "output directory")->required();

  // stats
  DatasetArgs stats_data;
  auto* stats_cmd = app.add_subcommand("stats", "print dataset statistics");
  stats_data.attach(stats_cmd);

  // synth
  SynthParams synth;
  std::string synth_dims = "visual=32,text=32";
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "generate a planted-community dataset");
  synth_cmd->add_option("--users", synth.n_users)->capture_default_str();
  synth_cmd->add_option("--items", synth.n_items)->capture_default_str();
  synth_cmd->add_option("--communities", synth.n_communities)->capture_default_str();
  synth_cmd->add_option("--p-in", synth.p_in)->capture_default_str();
  synth_cmd->add_option("--p-out", synth.p_out)->capture_default_str();
  synth_cmd->add_option("--dims", synth_dims, "modality=dim list")->capture_default_str();
  synth_cmd->add_option("--noise-sigma", synth.noise_sigma)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  // evaluate
  DatasetArgs eval_data;
  ImputeArgs eval_args;
  SweepConfig sweep;
  std::string methods = "zeros,random,global-mean,neigh-mean,multihop,pers-pagerank";
  std::string top_k_grid = "20";
  std::string hops_grid = "10";
  std::string eval_out;
  bool no_timing = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "mask-and-recover sweep");
  eval_data.attach(eval_cmd);
  eval_cmd->add_option("--hide-fraction", sweep.hide_fraction)->capture_default_str();
  eval_cmd->add_option("--methods", methods, "comma-separated methods")->capture_default_str();
  eval_cmd->add_option("--top-k-grid", top_k_grid, "start:stop:step")->capture_default_str();
  eval_cmd->add_option("--hops-grid", hops_grid, "start:stop:step")->capture_default_str();
  eval_args.attach(eval_cmd);
  eval_cmd->add_option("--out", eval_out, "report file (JSON)")->required();
  eval_cmd->add_flag("--no-timing", no_timing, "omit wall-clock fields from the report");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*impute_cmd) {
      const ImputeConfig cfg = impute_args.resolve();
      Dataset ds = load_checked(impute_data.interactions, impute_data.features, impute_data.mask);
      auto [imputed, report] = impute(ds.features, ds.interactions, cfg);
      ensure_dir(impute_out);
      write_features(impute_out, imputed);
      write_text(fs::path(impute_out) / "report.json", run_report_json(report));
      for (const auto& m : report.modalities) {
        out << m.modality << ": imputed " << m.imputed_rows << " rows";
        if (m.cold_rows) out << " (" << m.cold_rows << " cold)";
        out << '\n';
      }
    } else if (*drop_cmd) {
      Dataset ds = load_checked(drop_data.interactions, drop_data.features, drop_data.mask);
      DropResult dropped = drop_missing(ds.interactions, ds.features);
      ensure_dir(drop_out);
      const fs::path dir(drop_out);
      write_interactions(dir / "interactions.tsv", dropped.interactions);
      write_features(dir, dropped.features);
      write_mask(dir / "mask.tsv", dropped.features, dropped.interactions);
      write_text(dir / "stats.json", drop_report_json(dropped.before, dropped.after));
      out << format_stats_table(dropped.before, dropped.after);
    } else if (*stats_cmd) {
      Dataset ds = load_checked(stats_data.interactions, stats_data.features, stats_data.mask);
      out << format_stats_table(dataset_stats(ds.interactions, ds.features));
    } else if (*synth_cmd) {
      synth.modalities = parse_dims(synth_dims);
      SynthDataset ds = synth_generate(synth);
      ensure_dir(synth_out);
      const fs::path dir(synth_out);
      write_interactions(dir / "interactions.tsv", ds.interactions);
      write_features(dir, ds.features);
      write_mask(dir / "mask.tsv", ds.features, ds.interactions);
      std::ostringstream communities;
      for (std::size_t i = 0; i < ds.item_community.size(); ++i) {
        communities << ds.interactions.item_ids()[i] << '\t' << ds.item_community[i] << '\n';
      }
      write_text(dir / "communities.tsv", communities.str());
      out << format_stats_table(dataset_stats(ds.interactions, ds.features));
    } else if (*eval_cmd) {
      sweep.base = eval_args.resolve();
      sweep.threads = sweep.base.threads;
      sweep.seed = sweep.base.seed;
      sweep.methods.clear();
      for (const auto& name : split(methods, ',')) sweep.methods.push_back(parse_method(name));
      sweep.top_k_grid = parse_grid(top_k_grid);
      sweep.hops_grid = parse_grid(hops_grid);
      Dataset ds = load_checked(eval_data.interactions, eval_data.features, eval_data.mask);
      const auto rows = run_sweep(ds.interactions, ds.features, sweep);
      write_text(eval_out, sweep_report_json(sweep, rows, !no_timing));
      for (const auto& row : rows) {
        out << to_string(row.config.method) << " top_k=" << row.config.top_k
            << " hops=" << row.config.hops;
        if (row.error) {
          out << "  " << to_string(*row.error) << '\n';
          continue;
        }
        for (const auto& m : row.metrics.modalities) {
          out << "  " << m.modality << ": rmse=" << m.rmse << " cos=" << m.mean_cosine;
        }
        out << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace graphimpute::cli
