#include "cawsim/scaling.hpp"

#include "cawsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace cawsim {

namespace {

// Flag the true argmin (ties flag all minima) per dimension within each
// (subject, group) cell.
void flag_minima(ScenarioResult& result) {
    auto cell_key = [](const ScenarioRow& r) { return r.subject + "\x1f" + r.group; };
    std::vector<std::string> keys;
    for (const ScenarioRow& r : result.rows) {
        if (std::find(keys.begin(), keys.end(), cell_key(r)) == keys.end())
            keys.push_back(cell_key(r));
    }
    for (const std::string& key : keys) {
        std::vector<ScenarioRow*> cell;
        for (ScenarioRow& r : result.rows)
            if (cell_key(r) == key) cell.push_back(&r);
        auto flag = [&](auto getter, auto setter) {
            double best = getter(*cell.front());
            for (ScenarioRow* r : cell) best = std::min(best, getter(*r));
            for (ScenarioRow* r : cell) setter(*r, getter(*r) == best);
        };
        flag([](const ScenarioRow& r) { return r.runtime_h; },
             [](ScenarioRow& r, bool v) { r.min_runtime = v; });
        flag([](const ScenarioRow& r) { return r.energy_kwh; },
             [](ScenarioRow& r, bool v) { r.min_energy = v; });
        flag([](const ScenarioRow& r) { return r.embodied_g; },
             [](ScenarioRow& r, bool v) { r.min_embodied = v; });
        for (std::size_t s = 0; s < result.series_labels.size(); ++s) {
            flag([s](const ScenarioRow& r) { return r.emissions_g[s]; },
                 [s](ScenarioRow& r, bool v) { r.min_emissions[s] = v; });
        }
    }
}

std::vector<TimestampMs> placements(const StartPolicy& policy, int local_hour) {
    if (policy.fixed_start_ms) return {*policy.fixed_start_ms};
    std::vector<TimestampMs> out;
    out.reserve(12);
    for (int month = 1; month <= 12; ++month)
        out.push_back(median_day_ms(policy.year, month) +
                      static_cast<TimestampMs>(local_hour) * kMsPerHour -
                      static_cast<TimestampMs>(policy.utc_offset_minutes) * kMsPerMinute);
    return out;
}

double mean_task_emissions(const TaskRecord& task, const NodeSpec& node,
                           const std::string& governor, const CiSeries& series,
                           const std::vector<TimestampMs>& starts) {
    if (task.duration_s <= 0.0) return 0.0;
    double power = task_power_kw(task, node, governor);
    TimestampMs dur_ms = task.end_ms() - task.start_ms;
    double sum = 0.0;
    for (TimestampMs s : starts) sum += integrate_emissions(series, s, s + dur_ms, power);
    return sum / static_cast<double>(starts.size());
}

std::string node_group(const NodeSpec& node) { return node.low_confidence ? "cloud" : "cluster"; }

} // namespace

ScenarioResult compare_nodes(const WorkflowTrace& measurements,
                             const std::vector<std::string>& candidates,
                             const NodeCatalog& catalog, const std::string& governor,
                             const std::vector<LabeledSeries>& series, const StartPolicy& policy) {
    if (candidates.empty()) fail(ErrorCode::invalid_argument, "no candidate nodes given");

    // Subjects in order of first appearance.
    std::vector<std::string> processes;
    for (const TaskRecord& t : measurements.tasks)
        if (std::find(processes.begin(), processes.end(), t.process) == processes.end())
            processes.push_back(t.process);

    ScenarioResult result;
    result.scenario = "nodes";
    for (const LabeledSeries& s : series) result.series_labels.push_back(s.label);

    for (std::size_t pi = 0; pi < processes.size(); ++pi) {
        const std::string& process = processes[pi];
        int hour = policy.first_hour_local + policy.hour_step * static_cast<int>(pi);
        if (auto it = policy.hour_overrides.find(process); it != policy.hour_overrides.end())
            hour = it->second;
        std::vector<TimestampMs> starts = placements(policy, hour);

        for (const std::string& candidate : candidates) {
            const NodeSpec& node = catalog.at(candidate);
            const TaskRecord* row = nullptr;
            for (const TaskRecord& t : measurements.tasks)
                if (t.process == process && t.node_id == candidate) {
                    row = &t;
                    break;
                }
            if (!row)
                fail(ErrorCode::missing_variant_trace,
                     "no measurement of '" + process + "' on node '" + candidate + "'");

            ScenarioRow out;
            out.subject = process;
            out.variant = candidate;
            out.group = node_group(node);
            out.low_confidence = node.low_confidence;
            out.runtime_h = row->duration_s / 3600.0;
            out.energy_kwh = task_energy(*row, node, governor).total_kwh;
            for (const LabeledSeries& s : series)
                out.emissions_g.push_back(
                    mean_task_emissions(*row, node, governor, *s.series, starts));
            out.embodied_g = node.lca_emissions_g * out.runtime_h / node.lifetime_h;
            out.min_emissions.assign(series.size(), false);
            result.rows.push_back(std::move(out));
        }
    }
    flag_minima(result);
    return result;
}

WorkflowTrace dilate_trace(const WorkflowTrace& base, double factor, const NodeCatalog& catalog) {
    if (factor <= 0.0) fail(ErrorCode::invalid_argument, "runtime multiplier must be positive");
    WorkflowTrace out = base;
    out.warnings.clear();
    if (factor == 1.0) return out;
    for (TaskRecord& t : out.tasks) {
        TimestampMs offset = t.start_ms - base.origin_start_ms;
        t.start_ms = base.origin_start_ms +
                     static_cast<TimestampMs>(std::llround(static_cast<double>(offset) * factor));
        t.submit_ms = std::min(t.submit_ms, t.start_ms);
        t.duration_s *= factor;
    }
    finalize_trace(out, catalog);
    return out;
}

ScenarioResult compare_governors(const WorkflowTrace& base,
                                 const std::vector<GovernorVariant>& governors,
                                 const NodeCatalog& catalog,
                                 const std::vector<LabeledSeries>& series) {
    if (governors.empty()) fail(ErrorCode::invalid_argument, "no governors given");

    ScenarioResult result;
    result.scenario = "governors";
    for (const LabeledSeries& s : series) result.series_labels.push_back(s.label);

    for (const GovernorVariant& variant : governors) {
        WorkflowTrace dilated;
        const WorkflowTrace* trace = variant.trace;
        if (!trace) {
            dilated = dilate_trace(base, variant.runtime_multiplier, catalog);
            trace = &dilated;
        }
        // Validate the governor against every node in use before evaluating.
        for (const NodeCount& nc : trace->node_assignment)
            catalog.at(nc.node_id).curve(variant.name);

        ScenarioRow out;
        out.subject = base.workflow_name;
        out.variant = variant.name;
        out.group = "cluster";
        out.runtime_h = makespan_seconds(*trace) / 3600.0;
        out.energy_kwh = trace_energy(*trace, catalog, variant.name).total_kwh;
        for (const LabeledSeries& s : series)
            out.emissions_g.push_back(
                operational_emissions(*trace, catalog, variant.name, *s.series));
        out.embodied_g = embodied_emissions(*trace, catalog);
        out.min_emissions.assign(series.size(), false);
        result.rows.push_back(std::move(out));
    }
    flag_minima(result);
    return result;
}

ScenarioResult compare_cluster_sizes(const std::vector<const WorkflowTrace*>& traces,
                                     const NodeCatalog& catalog, const std::string& governor,
                                     const std::vector<LabeledSeries>& series) {
    if (traces.empty()) fail(ErrorCode::missing_variant_trace, "no cluster-size traces given");

    ScenarioResult result;
    result.scenario = "cluster";
    for (const LabeledSeries& s : series) result.series_labels.push_back(s.label);

    for (const WorkflowTrace* trace : traces) {
        ScenarioRow out;
        out.subject = trace->workflow_name;
        out.variant = trace->resources_label();
        out.group = "cluster";
        out.runtime_h = makespan_seconds(*trace) / 3600.0;
        out.energy_kwh = trace_energy(*trace, catalog, governor).total_kwh;
        for (const LabeledSeries& s : series)
            out.emissions_g.push_back(operational_emissions(*trace, catalog, governor, *s.series));
        out.embodied_g = embodied_emissions(*trace, catalog);
        out.min_emissions.assign(series.size(), false);
        result.rows.push_back(std::move(out));
    }
    // All sizes compare within one cell.
    for (ScenarioRow& r : result.rows) r.subject = result.rows.front().subject;
    flag_minima(result);
    return result;
}

} // namespace cawsim
