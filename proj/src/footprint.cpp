#include "cawsim/footprint.hpp"

namespace cawsim {

double operational_emissions(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor, const CiSeries& series,
                             std::optional<TimestampMs> start_override_ms) {
    TimestampMs shift = start_override_ms ? *start_override_ms - trace.origin_start_ms : 0;
    double grams = 0.0;
    for (const TaskRecord& t : trace.tasks) {
        if (t.duration_s <= 0.0) continue;
        double power = task_power_kw(t, catalog.at(t.node_id), governor);
        grams += integrate_emissions(series, t.start_ms + shift, t.end_ms() + shift, power);
    }
    return grams;
}

double embodied_emissions(const WorkflowTrace& trace, const NodeCatalog& catalog) {
    double makespan_h = makespan_seconds(trace) / 3600.0;
    if (makespan_h <= 0.0) return 0.0;
    double grams = 0.0;
    for (const NodeCount& nc : trace.node_assignment) {
        const NodeSpec& node = catalog.at(nc.node_id);
        grams += nc.count * node.lca_emissions_g * makespan_h / node.lifetime_h;
    }
    return grams;
}

FootprintReport build_footprint_report(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                       const std::string& governor, const CiSeries* average,
                                       const CiSeries* marginal) {
    FootprintReport report;
    report.workflow_name = trace.workflow_name;
    report.resources = trace.resources_label();
    report.governor = governor;
    report.energy = trace_energy(trace, catalog, governor);
    if (average)
        report.operational_avg_g = operational_emissions(trace, catalog, governor, *average);
    if (marginal)
        report.operational_marg_g = operational_emissions(trace, catalog, governor, *marginal);
    report.embodied_g = embodied_emissions(trace, catalog);
    report.reserved_memory_energy_kwh = reserved_memory_energy_kwh(trace, catalog);
    if (average) {
        TimestampMs end =
            trace.origin_start_ms +
            static_cast<TimestampMs>(std::int64_t(makespan_seconds(trace) * 1000.0 + 0.5));
        double hours = static_cast<double>(end - trace.origin_start_ms) / kMsPerHourD;
        double mem_kw = hours > 0.0 ? report.reserved_memory_energy_kwh / hours : 0.0;
        report.reserved_memory_emissions_g =
            integrate_emissions(*average, trace.origin_start_ms, end, mem_kw);
        double operational = report.operational_avg_g.value_or(0.0);
        double denom = operational + *report.reserved_memory_emissions_g;
        if (denom > 0.0) report.reserved_share = *report.reserved_memory_emissions_g / denom;
    }
    return report;
}

} // namespace cawsim
