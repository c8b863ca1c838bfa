#pragma once

#include "cawsim/ci.hpp"
#include "cawsim/power.hpp"
#include "cawsim/trace.hpp"

#include <optional>
#include <string>

namespace cawsim {

struct FootprintReport {
    std::string workflow_name;
    std::string resources;
    std::string governor;
    EnergyBreakdown energy;
    std::optional<double> operational_avg_g;
    std::optional<double> operational_marg_g;
    double embodied_g = 0.0;
    double reserved_memory_energy_kwh = 0.0;
    // Reserved-memory emissions use the average signal (reported separately,
    // never folded into shifting or scaling objectives).
    std::optional<double> reserved_memory_emissions_g;
    std::optional<double> reserved_share; // reserved / (operational_avg + reserved)
};

// Per-task integration of power against the CI series. When start_override is
// given, every task interval is shifted by (start_override - origin_start).
double operational_emissions(const WorkflowTrace& trace, const NodeCatalog& catalog,
                             const std::string& governor, const CiSeries& series,
                             std::optional<TimestampMs> start_override_ms = std::nullopt);

// LCA emissions prorated per reserved node: lca * makespan / lifetime.
double embodied_emissions(const WorkflowTrace& trace, const NodeCatalog& catalog);

FootprintReport build_footprint_report(const WorkflowTrace& trace, const NodeCatalog& catalog,
                                       const std::string& governor, const CiSeries* average,
                                       const CiSeries* marginal);

} // namespace cawsim
