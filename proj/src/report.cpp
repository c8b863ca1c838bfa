#include "cawsim/report.hpp"

#include "cawsim/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace cawsim {

using nlohmann::json;

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

namespace {

json optional_number(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::string fixed_or_empty(const json& v, int decimals) {
    if (v.is_null()) return "";
    return format_fixed(v.get<double>(), decimals);
}

json grid_values_to_json(const std::vector<std::vector<std::optional<double>>>& values) {
    json rows = json::array();
    for (const auto& row : values) {
        json r = json::array();
        for (const auto& cell : row) r.push_back(optional_number(cell));
        rows.push_back(r);
    }
    return rows;
}

} // namespace

std::string footprint_to_json_text(const FootprintReport& report) {
    json j{{"type", "footprint"},
           {"workflow", report.workflow_name},
           {"resources", report.resources},
           {"governor", report.governor},
           {"energy",
            {{"cpu_kwh", report.energy.cpu_kwh},
             {"memory_kwh", report.energy.memory_kwh},
             {"total_kwh", report.energy.total_kwh}}},
           {"operational_avg_g", optional_number(report.operational_avg_g)},
           {"operational_marg_g", optional_number(report.operational_marg_g)},
           {"embodied_g", report.embodied_g},
           {"reserved_memory_energy_kwh", report.reserved_memory_energy_kwh},
           {"reserved_memory_emissions_g", optional_number(report.reserved_memory_emissions_g)},
           {"reserved_share", optional_number(report.reserved_share)}};
    return j.dump(2) + "\n";
}

std::string plan_to_json_text(const ShiftPlan& plan) {
    json windows = json::array();
    for (const ShiftAssignment& a : plan.assignment)
        windows.push_back({{"window_index", a.window_index},
                           {"interval_start_utc", format_timestamp_ms(a.interval.start_ms)},
                           {"interval_start_utc_ms", a.interval.start_ms},
                           {"mean_ci_g_per_kwh", a.interval.mean_ci}});
    json j{{"type", "shift_plan"},
           {"mode", shift_mode_name(plan.mode)},
           {"anchor_utc", format_timestamp_ms(plan.anchor_ms)},
           {"anchor_utc_ms", plan.anchor_ms},
           {"window_length_h", plan.length_h},
           {"chosen_start_utc", format_timestamp_ms(plan.chosen_start_ms)},
           {"chosen_start_utc_ms", plan.chosen_start_ms},
           {"baseline_emissions_g", plan.baseline_emissions_g},
           {"projected_emissions_g", plan.projected_emissions_g},
           {"reduction", plan.reduction},
           {"total_overhead_s", plan.total_overhead_s},
           {"overhead_emissions_g", plan.overhead_emissions_g},
           {"embodied_increase_g", plan.embodied_increase_g},
           {"assignment", windows}};
    return j.dump(2) + "\n";
}

std::string grid_to_json_text(const ReductionGrid& grid) {
    json anchors = json::array();
    for (TimestampMs a : grid.anchors_ms) anchors.push_back(format_timestamp_ms(a));
    json months = json::array();
    for (int m = 1; m <= 12; ++m) months.push_back(m);
    json j{{"type", "reduction_grid"},
           {"workflow", grid.workflow_name},
           {"year", grid.year},
           {"region", grid.region},
           {"signal", signal_kind_name(grid.signal)},
           {"window_hours", grid.window_hours},
           {"months", months},
           {"anchors_utc", anchors},
           {"entire", grid_values_to_json(grid.entire)},
           {"interrupted", grid_values_to_json(grid.interrupted)}};
    return j.dump(2) + "\n";
}

std::string scenario_to_json_text(const ScenarioResult& result) {
    json rows = json::array();
    for (const ScenarioRow& r : result.rows) {
        json emissions = json::object();
        json mins = json::object();
        for (std::size_t i = 0; i < result.series_labels.size(); ++i) {
            emissions[result.series_labels[i] + "_g"] = r.emissions_g[i];
            mins["min_" + result.series_labels[i]] = static_cast<bool>(r.min_emissions[i]);
        }
        rows.push_back({{"subject", r.subject},
                        {"variant", r.variant},
                        {"group", r.group},
                        {"low_confidence", r.low_confidence},
                        {"runtime_h", r.runtime_h},
                        {"energy_kwh", r.energy_kwh},
                        {"emissions", emissions},
                        {"embodied_g", r.embodied_g},
                        {"min_runtime", r.min_runtime},
                        {"min_energy", r.min_energy},
                        {"min_embodied", r.min_embodied},
                        {"min_emissions", mins}});
    }
    json j{{"type", "scenario"},
           {"scenario", result.scenario},
           {"series_labels", result.series_labels},
           {"rows", rows}};
    return j.dump(2) + "\n";
}

namespace {

std::string footprint_csv(const json& j) {
    std::string out = "workflow,resources,energy_kwh,avg_g,marg_g,emb_g\n";
    out += j.at("workflow").get<std::string>() + "," + j.at("resources").get<std::string>() + ",";
    out += format_fixed(j.at("energy").at("total_kwh").get<double>(), 2) + ",";
    out += fixed_or_empty(j.at("operational_avg_g"), 2) + ",";
    out += fixed_or_empty(j.at("operational_marg_g"), 2) + ",";
    out += format_fixed(j.at("embodied_g").get<double>(), 2) + "\n";
    return out;
}

std::string reserved_csv(const json& j) {
    std::string out = "workflow,resources,reserved_energy_kwh,reserved_avg_g,overall_share_pct\n";
    out += j.at("workflow").get<std::string>() + "," + j.at("resources").get<std::string>() + ",";
    out += format_fixed(j.at("reserved_memory_energy_kwh").get<double>(), 2) + ",";
    out += fixed_or_empty(j.at("reserved_memory_emissions_g"), 2) + ",";
    const json& share = j.at("reserved_share");
    out += (share.is_null() ? "" : format_fixed(share.get<double>() * 100.0, 1)) + "\n";
    return out;
}

std::string plan_csv(const json& j) {
    std::string out = "window_index,interval_start_utc,mean_ci_g_per_kwh\n";
    for (const json& a : j.at("assignment"))
        out += std::to_string(a.at("window_index").get<int>()) + "," +
               a.at("interval_start_utc").get<std::string>() + "," +
               format_fixed(a.at("mean_ci_g_per_kwh").get<double>(), 2) + "\n";
    return out;
}

std::string grid_csv(const json& j, const std::string& mode) {
    const json& values = j.at(mode);
    std::string out = "month";
    for (const json& w : j.at("window_hours")) out += ",w" + std::to_string(w.get<int>());
    out += "\n";
    for (int m = 0; m < 12; ++m) {
        out += std::to_string(m + 1);
        for (const json& cell : values.at(m))
            out += "," + (cell.is_null() ? std::string{} : format_fixed(cell.get<double>(), 4));
        out += "\n";
    }
    return out;
}

std::string scenario_csv(const json& j) {
    std::vector<std::string> labels;
    for (const json& l : j.at("series_labels")) labels.push_back(l.get<std::string>());

    std::string out = "subject,variant,group,low_confidence,runtime_h,energy_kwh";
    for (const std::string& l : labels) out += "," + l + "_g";
    out += ",emb_g,min_runtime,min_energy";
    for (const std::string& l : labels) out += ",min_" + l;
    out += ",min_emb\n";

    // Cloud rows (low-confidence coefficients) reported as a separated group.
    auto emit = [&](const json& r) {
        out += r.at("subject").get<std::string>() + "," + r.at("variant").get<std::string>() +
               "," + r.at("group").get<std::string>() + "," +
               (r.at("low_confidence").get<bool>() ? "true" : "false") + "," +
               format_fixed(r.at("runtime_h").get<double>(), 2) + "," +
               format_fixed(r.at("energy_kwh").get<double>(), 2);
        for (const std::string& l : labels)
            out += "," + format_fixed(r.at("emissions").at(l + "_g").get<double>(), 2);
        out += "," + format_fixed(r.at("embodied_g").get<double>(), 2);
        out += std::string(",") + (r.at("min_runtime").get<bool>() ? "true" : "false");
        out += std::string(",") + (r.at("min_energy").get<bool>() ? "true" : "false");
        for (const std::string& l : labels)
            out += std::string(",") +
                   (r.at("min_emissions").at("min_" + l).get<bool>() ? "true" : "false");
        out += std::string(",") + (r.at("min_embodied").get<bool>() ? "true" : "false") + "\n";
    };
    for (const json& r : j.at("rows"))
        if (r.at("group").get<std::string>() != "cloud") emit(r);
    for (const json& r : j.at("rows"))
        if (r.at("group").get<std::string>() == "cloud") emit(r);
    return out;
}

std::string heatmap_json(const json& j) {
    json out{{"kind", "heatmap"},
             {"workflow", j.at("workflow")},
             {"year", j.at("year")},
             {"region", j.at("region")},
             {"signal", j.at("signal")},
             {"x_months", j.at("months")},
             {"y_window_hours", j.at("window_hours")},
             {"entire", j.at("entire")},
             {"interrupted", j.at("interrupted")}};
    return out.dump(2) + "\n";
}

std::string bars_json(const json& j) {
    json out{{"kind", "bars"},
             {"workflow", j.at("workflow")},
             {"year", j.at("year")},
             {"region", j.at("region")},
             {"signal", j.at("signal")},
             {"months", j.at("months")},
             {"window_hours", j.at("window_hours")},
             {"values", j.at("interrupted")}};
    return out.dump(2) + "\n";
}

} // namespace

std::string render_result(const std::string& result_json_text, const std::string& format) {
    json j;
    try {
        j = json::parse(result_json_text);
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("result is not valid JSON: ") + e.what());
    }
    std::string type = j.value("type", std::string{});
    try {
        if (format == "json") return j.dump(2) + "\n";
        if (type == "footprint") {
            if (format == "csv") return footprint_csv(j);
            if (format == "reserved_csv") return reserved_csv(j);
        } else if (type == "shift_plan") {
            if (format == "csv") return plan_csv(j);
        } else if (type == "reduction_grid") {
            if (format == "csv" || format == "csv:entire") return grid_csv(j, "entire");
            if (format == "csv:interrupted") return grid_csv(j, "interrupted");
            if (format == "heatmap_json") return heatmap_json(j);
            if (format == "bars_json") return bars_json(j);
        } else if (type == "scenario") {
            if (format == "csv") return scenario_csv(j);
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("malformed result JSON: ") + e.what());
    }
    fail(ErrorCode::invalid_argument,
         "cannot render result type '" + type + "' as '" + format + "'");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

} // namespace cawsim
