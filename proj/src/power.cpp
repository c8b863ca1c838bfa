#include "cawsim/power.hpp"

#include "cawsim/error.hpp"

namespace cawsim {

double task_cpu_power_kw(const TaskRecord& task, const NodeSpec& node,
                         const std::string& governor) {
    const PowerCurve& c = node.curve(governor);
    double total = static_cast<double>(node.cpus_total);
    double busy_cores = task.cpu_utilization_pct / 100.0;
    double watts = c.p_idle_w * static_cast<double>(task.cpus_allocated) / total +
                   (c.p_max_w - c.p_idle_w) * busy_cores / total;
    return watts / 1000.0;
}

double task_memory_power_kw(const TaskRecord& task, const NodeSpec& node,
                            const std::string& governor) {
    const PowerCurve& c = node.curve(governor);
    return c.mem_coeff_w_per_gb * task.memory_allocated_gb() / 1000.0;
}

double task_power_kw(const TaskRecord& task, const NodeSpec& node, const std::string& governor) {
    return task_cpu_power_kw(task, node, governor) + task_memory_power_kw(task, node, governor);
}

EnergyBreakdown task_energy(const TaskRecord& task, const NodeSpec& node,
                            const std::string& governor) {
    double hours = task.duration_s / 3600.0;
    EnergyBreakdown e;
    e.cpu_kwh = task_cpu_power_kw(task, node, governor) * hours;
    e.memory_kwh = task_memory_power_kw(task, node, governor) * hours;
    e.total_kwh = e.cpu_kwh + e.memory_kwh;
    return e;
}

EnergyBreakdown trace_energy(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor) {
    EnergyBreakdown sum;
    for (const TaskRecord& t : trace.tasks) {
        EnergyBreakdown e = task_energy(t, catalog.at(t.node_id), governor);
        sum.cpu_kwh += e.cpu_kwh;
        sum.memory_kwh += e.memory_kwh;
    }
    sum.total_kwh = sum.cpu_kwh + sum.memory_kwh;
    return sum;
}

double reserved_memory_energy_kwh(const WorkflowTrace& trace, const NodeCatalog& catalog) {
    double makespan_h = makespan_seconds(trace) / 3600.0;
    double kwh = 0.0;
    for (const NodeCount& nc : trace.node_assignment) {
        const NodeSpec& node = catalog.at(nc.node_id);
        kwh += nc.count * node.mem_coeff_w_per_gb() * node.memory_total_gb() * makespan_h / 1000.0;
    }
    return kwh;
}

double cluster_idle_power_kw(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor) {
    double kw = 0.0;
    for (const NodeCount& nc : trace.node_assignment)
        kw += nc.count * catalog.at(nc.node_id).curve(governor).p_idle_w / 1000.0;
    return kw;
}

} // namespace cawsim
