#pragma once

// Shared fixture builders and independent oracles for the test suites. The
// oracles deliberately re-derive results with straight loops over the raw
// samples so they share no code path with the implementation they check.

#include "cawsim/catalog.hpp"
#include "cawsim/ci.hpp"
#include "cawsim/power.hpp"
#include "cawsim/trace.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace cawtest {

using namespace cawsim;

inline NodeCatalog simple_catalog() {
    NodeCatalog catalog;
    NodeSpec n;
    n.node_id = "n1";
    n.hardware = "test node";
    n.cpus_total = 16;
    n.memory_total_b = std::int64_t{32} * 1073741824;
    n.lca_emissions_g = 10000.0;
    n.lifetime_h = 35040.0;
    n.governors["performance"] = {80.0, 280.0, 0.392};
    n.governors["powersave"] = {60.0, 170.0, 0.392};
    catalog.add(n);

    NodeSpec pure;
    pure.node_id = "pure"; // zero idle, zero memory coefficient: power == busy share
    pure.hardware = "idealized node";
    pure.cpus_total = 100;
    pure.memory_total_b = std::int64_t{16} * 1073741824;
    pure.lca_emissions_g = 5000.0;
    pure.lifetime_h = 35040.0;
    pure.governors["performance"] = {0.0, 1000.0, 0.0};
    catalog.add(pure);
    return catalog;
}

inline TaskRecord make_task(const std::string& id, TimestampMs start_ms, double duration_s,
                            double pct, int cpus, double mem_gb, const std::string& node = "n1") {
    TaskRecord t;
    t.task_id = id;
    t.process = id;
    t.submit_ms = start_ms;
    t.start_ms = start_ms;
    t.duration_s = duration_s;
    t.cpu_utilization_pct = pct;
    t.cpus_allocated = cpus;
    t.memory_allocated_b = static_cast<std::int64_t>(mem_gb * 1073741824.0);
    t.node_id = node;
    return t;
}

inline WorkflowTrace make_trace(std::vector<TaskRecord> tasks, const NodeCatalog& catalog,
                                const std::string& name = "test_wf",
                                const std::string& cluster = "") {
    WorkflowTrace trace;
    trace.workflow_name = name;
    trace.tasks = std::move(tasks);
    if (!cluster.empty()) trace.node_assignment = parse_cluster_spec(cluster);
    finalize_trace(trace, catalog);
    trace.warnings.clear();
    return trace;
}

// A task that consumes exactly `power_kw` (<= 1.0) on the "pure" node:
// p_idle = 0, p_max = 1000 W over 100 cores, so %cpu = 10000 * power_kw.
inline TaskRecord constant_power_task(const std::string& id, TimestampMs start_ms,
                                      double duration_s, double power_kw) {
    return make_task(id, start_ms, duration_s, power_kw * 10000.0, 100, 0.0, "pure");
}

inline CiSeries flat_series(TimestampMs start_ms, std::int64_t resolution_s, std::size_t count,
                            double value, const std::string& region = "GB",
                            SignalKind kind = SignalKind::average) {
    CiSeries s;
    s.region = region;
    s.kind = kind;
    s.resolution_s = resolution_s;
    for (std::size_t i = 0; i < count; ++i)
        s.samples.push_back(
            {start_ms + static_cast<TimestampMs>(i) * resolution_s * kMsPerSecond, value});
    return s;
}

inline CiSeries series_from_values(TimestampMs start_ms, std::int64_t resolution_s,
                                   const std::vector<double>& values,
                                   const std::string& region = "GB",
                                   SignalKind kind = SignalKind::average) {
    CiSeries s;
    s.region = region;
    s.kind = kind;
    s.resolution_s = resolution_s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.samples.push_back(
            {start_ms + static_cast<TimestampMs>(i) * resolution_s * kMsPerSecond, values[i]});
    return s;
}

// ---- oracles ------------------------------------------------------------

// Minute-resolution Riemann sum; exact for minute-aligned intervals.
inline double riemann_minute_oracle(const CiSeries& series, TimestampMs start_ms,
                                    TimestampMs end_ms, double power_kw) {
    double grams = 0.0;
    const std::int64_t res_ms = series.resolution_s * kMsPerSecond;
    for (TimestampMs t = start_ms; t < end_ms; t += kMsPerMinute) {
        double value = 0.0;
        for (const CiSample& s : series.samples)
            if (t >= s.start_ms && t < s.start_ms + res_ms) {
                value = s.ci_g_per_kwh;
                break;
            }
        grams += power_kw * (1.0 / 60.0) * value;
    }
    return grams;
}

// Straight-line reimplementation of the linear power model.
inline double oracle_task_power_kw(const TaskRecord& t, const NodeSpec& n,
                                   const std::string& governor) {
    const PowerCurve& c = n.governors.at(governor);
    double watts = c.p_idle_w * t.cpus_allocated / n.cpus_total +
                   (c.p_max_w - c.p_idle_w) * (t.cpu_utilization_pct / 100.0) / n.cpus_total +
                   c.mem_coeff_w_per_gb * (static_cast<double>(t.memory_allocated_b) / 1073741824.0);
    return watts / 1000.0;
}

// Independent per-task step integration over all samples.
inline double oracle_operational(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                 const std::string& governor, const CiSeries& series,
                                 TimestampMs start_override_ms) {
    const std::int64_t res_ms = series.resolution_s * kMsPerSecond;
    const TimestampMs shift = start_override_ms - trace.origin_start_ms;
    double grams = 0.0;
    for (const TaskRecord& t : trace.tasks) {
        double p = oracle_task_power_kw(t, catalog.at(t.node_id), governor);
        TimestampMs a = t.start_ms + shift;
        TimestampMs b = t.end_ms() + shift;
        for (const CiSample& s : series.samples) {
            TimestampMs lo = std::max(a, s.start_ms);
            TimestampMs hi = std::min(b, s.start_ms + res_ms);
            if (hi > lo)
                grams += p * (static_cast<double>(hi - lo) / kMsPerHourD) * s.ci_g_per_kwh;
        }
    }
    return grams;
}

// Brute-force entire-shift search: best placement over k = 0..length_h.
struct OracleEntire {
    TimestampMs best_start;
    double best_grams;
    double baseline_grams;
};
inline OracleEntire oracle_entire(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                  const std::string& governor, const CiSeries& series,
                                  TimestampMs anchor_ms, int length_h) {
    OracleEntire out{anchor_ms, 0.0, 0.0};
    for (int k = 0; k <= length_h; ++k) {
        TimestampMs start = anchor_ms + static_cast<TimestampMs>(k) * kMsPerHour;
        double g = oracle_operational(trace, catalog, governor, series, start);
        if (k == 0) {
            out.baseline_grams = g;
            out.best_grams = g;
            out.best_start = start;
        } else if (g < out.best_grams) {
            out.best_grams = g;
            out.best_start = start;
        }
    }
    return out;
}

// Exhaustive minimum over all order-preserving window-to-interval
// assignments (emissions only, no overhead model).
inline double oracle_best_order_preserving(const std::vector<double>& window_energies,
                                           const std::vector<double>& interval_cis) {
    const std::size_t n = window_energies.size();
    const std::size_t m = interval_cis.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    double best = -1.0;
    while (true) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += window_energies[i] * interval_cis[idx[i]];
        if (best < 0.0 || total < best) best = total;
        // next increasing index tuple
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                             static_cast<std::size_t>(i) + m - n)
            --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// Zero-overhead workflow whose hourly windows all hold one identical task,
// so every window has exactly the same energy.
inline WorkflowTrace uniform_window_trace(const NodeCatalog& catalog, TimestampMs origin_ms,
                                          int hours, double task_duration_s, double power_kw) {
    std::vector<TaskRecord> tasks;
    for (int h = 0; h < hours; ++h)
        tasks.push_back(constant_power_task("u" + std::to_string(h),
                                            origin_ms + static_cast<TimestampMs>(h) * kMsPerHour,
                                            task_duration_s, power_kw));
    return make_trace(std::move(tasks), catalog, "uniform_wf", "pure x1");
}

// Random-walk hourly CI year starting Jan 1 of `year`, long enough for
// December anchors with the longest windows.
inline CiSeries random_walk_year(int year, std::mt19937_64& rng, double lo = 20.0,
                                 double hi = 800.0) {
    std::normal_distribution<double> step(0.0, 30.0);
    CiSeries s;
    s.region = "GB";
    s.kind = SignalKind::average;
    s.resolution_s = 3600;
    TimestampMs t = utc_midnight_ms(year, 1, 1);
    TimestampMs end = utc_midnight_ms(year + 1, 1, 10);
    double v = 300.0;
    while (t < end) {
        v = std::clamp(v + step(rng), lo, hi);
        s.samples.push_back({t, v});
        t += kMsPerHour;
    }
    return s;
}

} // namespace cawtest
