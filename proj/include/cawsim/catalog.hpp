#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cawsim {

// Linear power model for one governor setting: whole-node wattage at 0% and
// 100% CPU utilization, plus a per-GB memory coefficient.
struct PowerCurve {
    double p_idle_w = 0.0;
    double p_max_w = 0.0;
    double mem_coeff_w_per_gb = 0.392;
};

struct NodeSpec {
    std::string node_id;
    std::string hardware;
    int cpus_total = 1;
    std::int64_t memory_total_b = 0;
    double lca_emissions_g = 0.0;       // whole-device lifecycle emissions
    double lifetime_h = 35040.0;        // 4 years
    bool low_confidence = false;        // cloud nodes with averaged coefficients
    bool estimate = false;              // power curve is an estimate, not fitted
    std::map<std::string, PowerCurve> governors;

    const PowerCurve& curve(const std::string& governor) const;
    // Memory coefficient used for reserved-memory accounting (performance
    // curve when present, otherwise the first governor).
    double mem_coeff_w_per_gb() const;
    double memory_total_gb() const;
};

class NodeCatalog {
public:
    NodeCatalog() = default;

    void add(NodeSpec spec);
    bool contains(const std::string& node_id) const;
    const NodeSpec& at(const std::string& node_id) const; // throws unknown_node
    std::vector<std::string> node_ids() const;
    std::size_t size() const { return nodes_.size(); }

private:
    std::map<std::string, NodeSpec> nodes_;
};

NodeCatalog load_catalog(const std::string& path);
NodeCatalog catalog_from_json_text(const std::string& json_text);
std::string catalog_to_json_text(const NodeCatalog& catalog);

} // namespace cawsim
