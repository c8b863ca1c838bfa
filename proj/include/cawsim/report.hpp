#pragma once

#include "cawsim/footprint.hpp"
#include "cawsim/scaling.hpp"
#include "cawsim/shifting.hpp"

#include <string>

namespace cawsim {

// "%.2f"-style fixed formatting; all tabular output uses two decimals for
// grams and kWh so identical inputs yield byte-identical files.
std::string format_fixed(double value, int decimals);

// Result objects serialize to JSON carrying a "type" discriminant
// ("footprint" | "shift_plan" | "reduction_grid" | "scenario").
std::string footprint_to_json_text(const FootprintReport& report);
std::string plan_to_json_text(const ShiftPlan& plan);
std::string grid_to_json_text(const ReductionGrid& grid);
std::string scenario_to_json_text(const ScenarioResult& result);

// Renders a serialized result into an output format:
//   "json"                      canonical pretty JSON (sorted keys)
//   "csv"                       the main table for the result type
//   "csv:entire"/"csv:interrupted"  reduction grid, one mode
//   "reserved_csv"              reserved-memory table (footprint only)
//   "heatmap_json"              months x windows grids, both modes
//   "bars_json"                 interrupted-mode bar-chart data
std::string render_result(const std::string& result_json_text, const std::string& format);

void write_text_file(const std::string& path, const std::string& content);

} // namespace cawsim
