#include "graphimpute/report.hpp"

#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace graphimpute {

namespace {

using nlohmann::json;

json config_object(const ImputeConfig& cfg) {
  json j;
  j["method"] = to_string(cfg.method);
  j["top_k"] = cfg.top_k;
  j["hops"] = cfg.hops;
  j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  j["ppr_mode"] = to_string(cfg.ppr_mode);
  j["cold_fallback"] = to_string(cfg.cold_fallback);
  j["neighbor_policy"] = to_string(cfg.neighbor_policy);
  j["iter_tolerance"] = cfg.iter_tolerance;
  j["max_steps"] = cfg.max_steps;
  j["exact_cap"] = cfg.exact_cap;
  j["clamp"] = cfg.clamp;
  return j;
}

json stats_object(const DatasetStats& s) {
  json j;
  j["users"] = s.n_users;
  j["items"] = s.n_items;
  j["interactions"] = s.n_interactions;
  j["missing"] = json::object();
  for (const auto& [name, count] : s.missing) j["missing"][name] = count;
  return j;
}

json metrics_object(const EvalReport& report) {
  json out = json::array();
  for (const auto& m : report.modalities) {
    out.push_back({{"modality", m.modality},
                   {"n_evaluated", m.n_evaluated},
                   {"rmse", m.rmse},
                   {"mean_cosine", m.mean_cosine},
                   {"n_cosine", m.n_cosine},
                   {"n_cosine_excluded", m.n_cosine_excluded}});
  }
  return out;
}

}  // namespace

std::string config_json(const ImputeConfig& cfg) { return config_object(cfg).dump(2) + "\n"; }

std::string run_report_json(const ImputationRunReport& report, bool include_timing) {
  json j;
  j["config"] = config_object(report.config);
  j["graph"] = {{"edges", report.graph_edges}, {"cold_items", report.cold_items}};
  j["modalities"] = json::array();
  for (const auto& m : report.modalities) {
    j["modalities"].push_back({{"modality", m.modality},
                               {"imputed_rows", m.imputed_rows},
                               {"cold_rows", m.cold_rows},
                               {"hops", m.hops},
                               {"inner_steps", m.inner_steps},
                               {"residuals", m.residuals}});
  }
  if (include_timing) {
    j["timing"] = {{"graph_ms", report.graph_time_ms}, {"wall_ms", report.wall_time_ms}};
  }
  return j.dump(2) + "\n";
}

std::string drop_report_json(const DatasetStats& before, const DatasetStats& after) {
  json j;
  j["before"] = stats_object(before);
  j["after"] = stats_object(after);
  return j.dump(2) + "\n";
}

std::string sweep_report_json(const SweepConfig& sweep, const std::vector<SweepRow>& rows,
                              bool include_timing) {
  json j;
  j["hide_fraction"] = sweep.hide_fraction;
  j["seed"] = sweep.seed;
  j["rows"] = json::array();
  for (const auto& row : rows) {
    json r;
    r["index"] = row.index;
    r["config"] = config_object(row.config);
    if (row.error) {
      r["status"] = to_string(*row.error);
      r["error"] = row.error_message;
    } else {
      r["status"] = "ok";
      r["metrics"] = metrics_object(row.metrics);
    }
    if (include_timing) r["timing"] = {{"wall_ms", row.wall_time_ms}};
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

namespace {

void table(std::ostringstream& out, const std::vector<std::pair<std::string, const DatasetStats*>>& rows) {
  const DatasetStats& first = *rows.front().second;
  std::vector<std::string> header{"", "users", "items", "interactions"};
  for (const auto& [name, count] : first.missing) header.push_back("missing[" + name + "]");
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& [label, s] : rows) {
    std::vector<std::string> line{label, std::to_string(s->n_users), std::to_string(s->n_items),
                                  std::to_string(s->n_interactions)};
    for (const auto& [name, count] : first.missing) {
      auto it = s->missing.find(name);
      line.push_back(std::to_string(it == s->missing.end() ? 0 : it->second));
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      out << (c == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[c])) << line[c];
    }
    out << '\n';
  }
}

}  // namespace

std::string format_stats_table(const DatasetStats& stats) {
  std::ostringstream out;
  table(out, {{"dataset", &stats}});
  return out.str();
}

std::string format_stats_table(const DatasetStats& before, const DatasetStats& after) {
  std::ostringstream out;
  table(out, {{"full", &before}, {"dropped", &after}});
  return out.str();
}

}  // namespace graphimpute
