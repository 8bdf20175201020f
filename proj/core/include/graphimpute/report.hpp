#pragma once

#include <string>
#include <vector>

#include "graphimpute/eval.hpp"
#include "graphimpute/imputers.hpp"

namespace graphimpute {

// JSON documents with sorted keys. Timing fields are the only
// run-dependent content; pass include_timing = false to drop them.
std::string config_json(const ImputeConfig& cfg);
std::string run_report_json(const ImputationRunReport& report, bool include_timing = true);
std::string drop_report_json(const DatasetStats& before, const DatasetStats& after);
std::string sweep_report_json(const SweepConfig& sweep, const std::vector<SweepRow>& rows,
                              bool include_timing = true);

// Two-row text table in the layout of a dataset statistics table:
//   users  items  interactions  missing[<modality>]...
std::string format_stats_table(const DatasetStats& stats);
std::string format_stats_table(const DatasetStats& before, const DatasetStats& after);

}  // namespace graphimpute
