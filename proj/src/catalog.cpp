#include "cawsim/catalog.hpp"

#include "cawsim/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace cawsim {

using nlohmann::json;

const PowerCurve& NodeSpec::curve(const std::string& governor) const {
    auto it = governors.find(governor);
    if (it == governors.end())
        fail(ErrorCode::unknown_governor,
             "node '" + node_id + "' has no governor '" + governor + "'");
    return it->second;
}

double NodeSpec::mem_coeff_w_per_gb() const {
    auto it = governors.find("performance");
    if (it == governors.end()) it = governors.begin();
    if (it == governors.end()) return 0.392;
    return it->second.mem_coeff_w_per_gb;
}

double NodeSpec::memory_total_gb() const {
    return static_cast<double>(memory_total_b) / 1073741824.0;
}

void NodeCatalog::add(NodeSpec spec) {
    if (spec.node_id.empty())
        fail(ErrorCode::bad_format, "catalog node with empty node_id");
    if (spec.lifetime_h <= 0.0)
        fail(ErrorCode::bad_format, "node '" + spec.node_id + "': lifetime must be > 0");
    if (spec.governors.empty())
        fail(ErrorCode::bad_format, "node '" + spec.node_id + "': no governors defined");
    for (const auto& [name, curve] : spec.governors) {
        if (curve.p_idle_w < 0.0 || curve.p_max_w < curve.p_idle_w)
            fail(ErrorCode::bad_format, "node '" + spec.node_id + "', governor '" + name +
                                            "': requires 0 <= p_idle <= p_max");
        if (curve.mem_coeff_w_per_gb < 0.0)
            fail(ErrorCode::bad_format,
                 "node '" + spec.node_id + "', governor '" + name + "': mem_coeff must be >= 0");
    }
    nodes_[spec.node_id] = std::move(spec);
}

bool NodeCatalog::contains(const std::string& node_id) const {
    return nodes_.count(node_id) > 0;
}

const NodeSpec& NodeCatalog::at(const std::string& node_id) const {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end())
        fail(ErrorCode::unknown_node, "unknown node '" + node_id + "'");
    return it->second;
}

std::vector<std::string> NodeCatalog::node_ids() const {
    std::vector<std::string> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, spec] : nodes_) ids.push_back(id);
    return ids;
}

namespace {

PowerCurve curve_from_json(const json& j, const std::string& node_id) {
    PowerCurve c;
    if (!j.contains("p_idle_w") || !j.contains("p_max_w"))
        fail(ErrorCode::bad_format,
             "node '" + node_id + "': governor entry needs p_idle_w and p_max_w");
    c.p_idle_w = j.at("p_idle_w").get<double>();
    c.p_max_w = j.at("p_max_w").get<double>();
    c.mem_coeff_w_per_gb = j.value("mem_coeff_w_per_gb", 0.392);
    return c;
}

NodeSpec node_from_json(const json& j) {
    NodeSpec n;
    if (!j.contains("node_id")) fail(ErrorCode::bad_format, "catalog node without node_id");
    n.node_id = j.at("node_id").get<std::string>();
    n.hardware = j.value("hardware", std::string{});
    n.cpus_total = j.value("cpus_total", 1);
    if (n.cpus_total <= 0)
        fail(ErrorCode::bad_format, "node '" + n.node_id + "': cpus_total must be positive");
    if (j.contains("memory_total_b"))
        n.memory_total_b = j.at("memory_total_b").get<std::int64_t>();
    else if (j.contains("memory_total_gb"))
        n.memory_total_b =
            static_cast<std::int64_t>(std::llround(j.at("memory_total_gb").get<double>() * 1073741824.0));
    else
        fail(ErrorCode::bad_format, "node '" + n.node_id + "': missing memory_total_gb");
    n.lca_emissions_g = j.value("lca_emissions_g", 0.0);
    n.lifetime_h = j.value("lifetime_h", 35040.0);
    n.low_confidence = j.value("low_confidence", false);
    n.estimate = j.value("estimate", false);
    if (!j.contains("governors") || !j.at("governors").is_object())
        fail(ErrorCode::bad_format, "node '" + n.node_id + "': missing governors object");
    for (const auto& [name, cj] : j.at("governors").items())
        n.governors[name] = curve_from_json(cj, n.node_id);
    return n;
}

} // namespace

NodeCatalog catalog_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("catalog JSON parse error: ") + e.what());
    }
    if (!j.contains("nodes") || !j.at("nodes").is_array())
        fail(ErrorCode::bad_format, "catalog JSON needs a top-level 'nodes' array");
    NodeCatalog catalog;
    try {
        for (const auto& nj : j.at("nodes")) catalog.add(node_from_json(nj));
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("catalog JSON field error: ") + e.what());
    }
    if (catalog.size() == 0) fail(ErrorCode::bad_format, "catalog has no nodes");
    return catalog;
}

NodeCatalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io_error, "cannot open catalog file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return catalog_from_json_text(buf.str());
}

std::string catalog_to_json_text(const NodeCatalog& catalog) {
    json nodes = json::array();
    for (const auto& id : catalog.node_ids()) {
        const NodeSpec& n = catalog.at(id);
        json governors = json::object();
        for (const auto& [name, c] : n.governors)
            governors[name] = {{"p_idle_w", c.p_idle_w},
                               {"p_max_w", c.p_max_w},
                               {"mem_coeff_w_per_gb", c.mem_coeff_w_per_gb}};
        nodes.push_back({{"node_id", n.node_id},
                         {"hardware", n.hardware},
                         {"cpus_total", n.cpus_total},
                         {"memory_total_b", n.memory_total_b},
                         {"lca_emissions_g", n.lca_emissions_g},
                         {"lifetime_h", n.lifetime_h},
                         {"low_confidence", n.low_confidence},
                         {"estimate", n.estimate},
                         {"governors", governors}});
    }
    return json{{"nodes", nodes}}.dump(2) + "\n";
}

} // namespace cawsim
