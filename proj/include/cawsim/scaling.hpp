#pragma once

#include "cawsim/footprint.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cawsim {

// A CI series plus the column label it produces in reports, e.g. "avg_GB".
struct LabeledSeries {
    std::string label;
    const CiSeries* series = nullptr;
};

// Consistent task placement for what-if comparisons: the first subject starts
// at 09:00 local, each following subject two hours later, on the median day
// of each month of `year`; emissions are averaged over the twelve placements.
struct StartPolicy {
    int year = 2024;
    int utc_offset_minutes = 0;
    int first_hour_local = 9;
    int hour_step = 2;
    std::map<std::string, int> hour_overrides;   // per-process local start hour
    std::optional<TimestampMs> fixed_start_ms;   // single placement instead
};

struct ScenarioRow {
    std::string subject; // process name, or the workflow name
    std::string variant; // node id, governor name, or cluster label
    std::string group;   // "cluster" | "cloud"
    bool low_confidence = false;
    double runtime_h = 0.0;
    double energy_kwh = 0.0;
    std::vector<double> emissions_g; // parallel to ScenarioResult::series_labels
    double embodied_g = 0.0;
    bool min_runtime = false;
    bool min_energy = false;
    bool min_embodied = false;
    std::vector<bool> min_emissions;
};

// Minima are flagged per (subject, group) and per dimension; ties flag all.
struct ScenarioResult {
    std::string scenario; // "nodes" | "governors" | "cluster"
    std::vector<std::string> series_labels;
    std::vector<ScenarioRow> rows;
};

// Per-task what-ifs across candidate nodes. `measurements` holds one row per
// (process, node); a candidate without a row for some process is an error.
ScenarioResult compare_nodes(const WorkflowTrace& measurements,
                             const std::vector<std::string>& candidates,
                             const NodeCatalog& catalog, const std::string& governor,
                             const std::vector<LabeledSeries>& series, const StartPolicy& policy);

// Runtime effects of a governor are data, never synthesized: either a
// measured per-governor trace or a duration multiplier on the base trace.
struct GovernorVariant {
    std::string name;
    double runtime_multiplier = 1.0;
    const WorkflowTrace* trace = nullptr; // overrides the multiplier when set
};

// Whole-workflow governor comparison on the base trace's own schedule.
ScenarioResult compare_governors(const WorkflowTrace& base,
                                 const std::vector<GovernorVariant>& governors,
                                 const NodeCatalog& catalog,
                                 const std::vector<LabeledSeries>& series);

// Same workflow executed on clusters of different sizes, one trace per size.
ScenarioResult compare_cluster_sizes(const std::vector<const WorkflowTrace*>& traces,
                                     const NodeCatalog& catalog, const std::string& governor,
                                     const std::vector<LabeledSeries>& series);

// Time-dilated copy: start offsets and durations scaled by `factor`.
WorkflowTrace dilate_trace(const WorkflowTrace& base, double factor, const NodeCatalog& catalog);

} // namespace cawsim
