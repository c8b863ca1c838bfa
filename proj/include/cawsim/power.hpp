#pragma once

#include "cawsim/catalog.hpp"
#include "cawsim/trace.hpp"

#include <string>

namespace cawsim {

struct EnergyBreakdown {
    double cpu_kwh = 0.0;
    double memory_kwh = 0.0;
    double total_kwh = 0.0;

    bool operator==(const EnergyBreakdown&) const = default;
};

// Linear power model. A task carries the node's idle share proportional to
// its allocation; the dynamic share follows busy cores:
//   p_cpu = p_idle * alloc/total + (p_max - p_idle) * busy/total   [W]
//   p_mem = mem_coeff * allocated_GB                               [W]
// with busy = %cpu / 100. Returned in kW.
double task_power_kw(const TaskRecord& task, const NodeSpec& node, const std::string& governor);
double task_cpu_power_kw(const TaskRecord& task, const NodeSpec& node, const std::string& governor);
double task_memory_power_kw(const TaskRecord& task, const NodeSpec& node,
                            const std::string& governor);

EnergyBreakdown task_energy(const TaskRecord& task, const NodeSpec& node,
                            const std::string& governor);

// Sum of task energies over the whole trace.
EnergyBreakdown trace_energy(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor);

// Energy to keep the full memory of every reserved node powered over the
// workflow's makespan, independent of what tasks allocate.
double reserved_memory_energy_kwh(const WorkflowTrace& trace, const NodeCatalog& catalog);

// Whole-cluster idle power (all reserved nodes at 0% utilization), in kW.
double cluster_idle_power_kw(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor);

} // namespace cawsim
