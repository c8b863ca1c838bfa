#include "cawsim/shifting.hpp"

#include "cawsim/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace cawsim {

const char* shift_mode_name(ShiftMode mode) {
    return mode == ShiftMode::entire ? "entire" : "interrupted";
}

std::vector<ExecutionWindow> build_windows(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                           const std::string& governor,
                                           const ShiftOptions& options) {
    double makespan_s = makespan_seconds(trace);
    std::size_t n = static_cast<std::size_t>(std::ceil(makespan_s / 3600.0));
    if (n == 0) n = 1;

    std::vector<ExecutionWindow> windows(n);
    for (std::size_t i = 0; i < n; ++i) windows[i].index = static_cast<int>(i);

    TimestampMs origin = trace.origin_start_ms;
    for (const TaskRecord& t : trace.tasks) {
        TimestampMs offset = t.start_ms - origin;
        std::size_t w = std::min(static_cast<std::size_t>(offset / kMsPerHour), n - 1);
        TimestampMs window_end = static_cast<TimestampMs>(w + 1) * kMsPerHour;
        TimestampMs end_offset = t.end_ms() - origin;

        if (end_offset <= window_end) {
            windows[w].tasks_complete.push_back(t.task_id);
        } else {
            windows[w].tasks_partial.push_back(t.task_id);
            double overhead = options.overhead_spillover_only
                                  ? static_cast<double>(end_offset - window_end) / 1000.0
                                  : t.duration_s;
            windows[w].overhead_s = std::max(windows[w].overhead_s, overhead);
        }

        // Split the task's energy across the windows its execution occupies,
        // proportionally to time.
        double energy = task_energy(t, catalog.at(t.node_id), governor).total_kwh;
        TimestampMs dur_ms = t.end_ms() - t.start_ms;
        if (dur_ms <= 0) {
            windows[w].window_energy_kwh += energy;
            continue;
        }
        for (std::size_t j = w; j < n; ++j) {
            TimestampMs ws = static_cast<TimestampMs>(j) * kMsPerHour;
            TimestampMs we = ws + kMsPerHour;
            if (j == n - 1) we = std::max(we, end_offset); // final window absorbs the tail
            TimestampMs overlap = std::min(we, end_offset) - std::max(ws, offset);
            if (overlap <= 0) break;
            windows[j].window_energy_kwh +=
                energy * static_cast<double>(overlap) / static_cast<double>(dur_ms);
        }
    }
    return windows;
}

namespace {

void validate_entire_span(const CiSeries& series, const FlexibilityWindow& flex,
                          double makespan_s) {
    TimestampMs last_end = flex.anchor_ms + static_cast<TimestampMs>(flex.length_h) * kMsPerHour +
                           static_cast<TimestampMs>(std::ceil(makespan_s * 1000.0));
    if (flex.anchor_ms < series.span_begin_ms() || last_end > series.span_end_ms())
        fail(ErrorCode::out_of_range,
             "flexibility window [" + format_timestamp_ms(flex.anchor_ms) + " +" +
                 std::to_string(flex.length_h) + "h] plus the workflow runtime exceeds the CI span");
}

double checked_reduction(double baseline, double projected) {
    if (baseline <= 0.0) return 0.0;
    return (baseline - projected) / baseline;
}

} // namespace

ShiftPlan shift_entire(const WorkflowTrace& trace, const NodeCatalog& catalog,
                       const std::string& governor, const CiSeries& series,
                       const FlexibilityWindow& flex, const ShiftOptions& options) {
    if (flex.length_h < 0) fail(ErrorCode::invalid_argument, "flexibility length must be >= 0");
    double makespan_s = makespan_seconds(trace);
    validate_entire_span(series, flex, makespan_s);

    ShiftPlan plan;
    plan.mode = ShiftMode::entire;
    plan.anchor_ms = flex.anchor_ms;
    plan.length_h = flex.length_h;

    double best = 0.0;
    TimestampMs best_start = flex.anchor_ms;
    for (int k = 0; k <= flex.length_h; ++k) {
        TimestampMs start = flex.anchor_ms + static_cast<TimestampMs>(k) * kMsPerHour;
        double grams = operational_emissions(trace, catalog, governor, series, start);
        if (k == 0) plan.baseline_emissions_g = grams;
        if (k == 0 || grams < best) {
            best = grams;
            best_start = start;
        }
    }
    plan.projected_emissions_g = best;
    plan.chosen_start_ms = best_start;
    plan.reduction = checked_reduction(plan.baseline_emissions_g, plan.projected_emissions_g);

    std::vector<ExecutionWindow> windows = build_windows(trace, catalog, governor, options);
    plan.assignment.reserve(windows.size());
    for (const ExecutionWindow& w : windows) {
        TimestampMs ws = best_start + static_cast<TimestampMs>(w.index) * kMsPerHour;
        plan.assignment.push_back({w.index, ci_window(series, ws, ws + kMsPerHour)});
    }
    return plan;
}

ShiftPlan shift_interrupted(const WorkflowTrace& trace, const NodeCatalog& catalog,
                            const std::string& governor, const CiSeries& series,
                            const FlexibilityWindow& flex, const ShiftOptions& options) {
    if (flex.length_h <= 0) fail(ErrorCode::invalid_argument, "flexibility length must be > 0");
    std::vector<ExecutionWindow> windows = build_windows(trace, catalog, governor, options);
    const std::size_t n = windows.size();
    if (n > static_cast<std::size_t>(flex.length_h))
        fail(ErrorCode::infeasible_window,
             "workflow spans " + std::to_string(n) + " execution windows, more than the " +
                 std::to_string(flex.length_h) + "h flexibility window");

    // Candidate horizon runs N hours past the window end so a plan anchored
    // at the last feasible start can complete.
    const std::size_t horizon = static_cast<std::size_t>(flex.length_h) + n;
    TimestampMs horizon_end = flex.anchor_ms + static_cast<TimestampMs>(horizon) * kMsPerHour;
    if (flex.anchor_ms < series.span_begin_ms() || horizon_end > series.span_end_ms())
        fail(ErrorCode::out_of_range,
             "flexibility window [" + format_timestamp_ms(flex.anchor_ms) + " +" +
                 std::to_string(flex.length_h) + "h] plus the candidate horizon exceeds the CI span");

    std::vector<CiWindow> candidates = hourly_ci_windows(series, flex.anchor_ms, horizon);

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (candidates[a].mean_ci != candidates[b].mean_ci)
            return candidates[a].mean_ci < candidates[b].mean_ci;
        return candidates[a].start_ms < candidates[b].start_ms; // ties: earlier first
    });
    std::vector<std::size_t> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(selected.begin(), selected.end()); // chronological order preserved

    ShiftPlan plan;
    plan.mode = ShiftMode::interrupted;
    plan.anchor_ms = flex.anchor_ms;
    plan.length_h = flex.length_h;
    plan.chosen_start_ms = candidates[selected.front()].start_ms;

    double projected = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const CiWindow& interval = candidates[selected[i]];
        plan.assignment.push_back({windows[i].index, interval});
        projected += windows[i].window_energy_kwh * interval.mean_ci;
    }

    // Baseline: the same window-level accounting at the anchor placement.
    double baseline = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        baseline += windows[i].window_energy_kwh * candidates[i].mean_ci;
    plan.baseline_emissions_g = baseline;

    // Overhead per interruption: windows whose assigned interval is not
    // contiguous with the previous assignment.
    double idle_kw = options.charge_idle ? cluster_idle_power_kw(trace, catalog, governor) : 0.0;
    double lca_per_hour = 0.0;
    for (const NodeCount& nc : trace.node_assignment) {
        const NodeSpec& node = catalog.at(nc.node_id);
        lca_per_hour += nc.count * node.lca_emissions_g / node.lifetime_h;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const CiWindow& prev = candidates[selected[i - 1]];
        const CiWindow& cur = candidates[selected[i]];
        if (cur.start_ms != prev.start_ms + kMsPerHour) {
            double overhead_s = windows[i].overhead_s;
            plan.total_overhead_s += overhead_s;
            plan.overhead_emissions_g += idle_kw * (overhead_s / 3600.0) * cur.mean_ci;
            plan.embodied_increase_g += lca_per_hour * overhead_s / 3600.0;
        }
    }
    plan.projected_emissions_g = projected + plan.overhead_emissions_g;
    plan.reduction = checked_reduction(plan.baseline_emissions_g, plan.projected_emissions_g);
    return plan;
}

ReductionGrid monthly_sweep(const WorkflowTrace& trace, const NodeCatalog& catalog,
                            const std::string& governor, const CiSeries& series, int year,
                            const std::vector<int>& window_hours, const SweepOptions& options) {
    if (window_hours.empty()) fail(ErrorCode::invalid_argument, "no window lengths given");

    ReductionGrid grid;
    grid.year = year;
    grid.region = series.region;
    grid.signal = series.kind;
    grid.workflow_name = trace.workflow_name;
    grid.window_hours = window_hours;
    grid.entire.assign(12, std::vector<std::optional<double>>(window_hours.size()));
    grid.interrupted.assign(12, std::vector<std::optional<double>>(window_hours.size()));
    for (int month = 1; month <= 12; ++month) {
        TimestampMs local_9am =
            second_monday_ms(year, month) +
            static_cast<TimestampMs>(options.anchor_hour_local) * kMsPerHour;
        grid.anchors_ms.push_back(local_9am -
                                  static_cast<TimestampMs>(options.utc_offset_minutes) * kMsPerMinute);
    }

    struct Cell {
        int month_idx;
        std::size_t window_idx;
        ShiftMode mode;
    };
    std::vector<Cell> cells;
    for (int m = 0; m < 12; ++m)
        for (std::size_t w = 0; w < window_hours.size(); ++w) {
            cells.push_back({m, w, ShiftMode::entire});
            cells.push_back({m, w, ShiftMode::interrupted});
        }

    auto evaluate = [&](const Cell& cell) -> std::optional<double> {
        FlexibilityWindow flex{grid.anchors_ms[static_cast<std::size_t>(cell.month_idx)],
                               grid.window_hours[cell.window_idx]};
        try {
            ShiftPlan plan = cell.mode == ShiftMode::entire
                                 ? shift_entire(trace, catalog, governor, series, flex, options.shift)
                                 : shift_interrupted(trace, catalog, governor, series, flex,
                                                     options.shift);
            return plan.reduction;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::infeasible_window) return std::nullopt;
            throw;
        }
    };
    auto store = [&](const Cell& cell, std::optional<double> value) {
        auto& target = cell.mode == ShiftMode::entire ? grid.entire : grid.interrupted;
        target[static_cast<std::size_t>(cell.month_idx)][cell.window_idx] = value;
    };

    unsigned threads = options.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
    if (threads <= 1) {
        for (const Cell& cell : cells) store(cell, evaluate(cell));
    } else {
        // Each cell writes its own grid slot; no synchronization needed.
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned tid = 0; tid < threads; ++tid) {
            pool.emplace_back([&, tid] {
                try {
                    for (std::size_t i = next.fetch_add(1); i < cells.size();
                         i = next.fetch_add(1))
                        store(cells[i], evaluate(cells[i]));
                } catch (...) {
                    errors[tid] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return grid;
}

} // namespace cawsim
