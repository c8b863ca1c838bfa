#pragma once

#include "cawsim/footprint.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cawsim {

enum class ShiftMode { entire, interrupted };

const char* shift_mode_name(ShiftMode mode);

struct FlexibilityWindow {
    TimestampMs anchor_ms = 0; // earliest start (UTC)
    int length_h = 24;         // how far the start may be delayed
};

// One hour of the workflow's own timeline. Tasks belong to the window of
// their start hour; energy is split across the windows a task's execution
// occupies, proportionally to time.
struct ExecutionWindow {
    int index = 0;
    std::vector<std::string> tasks_complete; // start and finish inside
    std::vector<std::string> tasks_partial;  // start inside, finish later
    double window_energy_kwh = 0.0;
    double overhead_s = 0.0; // longest partial task (upper bound on delay)
};

struct ShiftAssignment {
    int window_index = 0;
    CiWindow interval;
};

struct ShiftPlan {
    ShiftMode mode = ShiftMode::entire;
    TimestampMs anchor_ms = 0;
    int length_h = 0;
    TimestampMs chosen_start_ms = 0; // entire mode: the minimizing placement
    std::vector<ShiftAssignment> assignment; // strictly increasing interval starts
    double baseline_emissions_g = 0.0;       // execution at the anchor
    double projected_emissions_g = 0.0;
    double reduction = 0.0; // (baseline - projected) / baseline
    double total_overhead_s = 0.0;
    double overhead_emissions_g = 0.0; // idle-power charge during interruptions
    double embodied_increase_g = 0.0;  // overhead_hours / lifetime * LCA
};

struct ShiftOptions {
    // Count only the spill-over past the window boundary instead of the full
    // duration of the longest partial task.
    bool overhead_spillover_only = false;
    // Charge interruption overhead at the cluster's idle power (nodes stay
    // reserved while paused).
    bool charge_idle = true;
};

std::vector<ExecutionWindow> build_windows(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                           const std::string& governor,
                                           const ShiftOptions& options = {});

// Exhaustive hour-by-hour start sweep over anchor + k*1h, k = 0..length_h;
// ties break toward the earliest start.
ShiftPlan shift_entire(const WorkflowTrace& trace, const NodeCatalog& catalog,
                       const std::string& governor, const CiSeries& series,
                       const FlexibilityWindow& flex, const ShiftOptions& options = {});

// Maps hourly execution windows onto the N lowest-mean-CI hourly intervals in
// [anchor, anchor + length + N), in chronological order.
ShiftPlan shift_interrupted(const WorkflowTrace& trace, const NodeCatalog& catalog,
                            const std::string& governor, const CiSeries& series,
                            const FlexibilityWindow& flex, const ShiftOptions& options = {});

struct ReductionGrid {
    int year = 0;
    std::string region;
    SignalKind signal = SignalKind::average;
    std::string workflow_name;
    std::vector<int> window_hours;
    std::vector<TimestampMs> anchors_ms; // one per month, 9AM local second Monday
    // values[month-1][window]; infeasible cells are empty.
    std::vector<std::vector<std::optional<double>>> entire;
    std::vector<std::vector<std::optional<double>>> interrupted;
};

struct SweepOptions {
    ShiftOptions shift;
    int utc_offset_minutes = 0; // fixed per-region offset for the 9AM anchor
    int anchor_hour_local = 9;
    unsigned threads = 0; // 0 = hardware concurrency, 1 = serial
};

// 12 x |windows| grid of reduction fractions for both modes, anchored at 9AM
// local time on the second Monday of each month. Cells are independent and
// may be evaluated in parallel; results are identical to serial execution.
ReductionGrid monthly_sweep(const WorkflowTrace& trace, const NodeCatalog& catalog,
                            const std::string& governor, const CiSeries& series, int year,
                            const std::vector<int>& window_hours, const SweepOptions& options = {});

} // namespace cawsim
