#include "cawsim/report.hpp"

#include "cawsim/error.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace cawsim;
using namespace cawtest;

namespace {

FootprintReport sample_report() {
    FootprintReport r;
    r.workflow_name = "demo_wf";
    r.resources = "atlantis x8";
    r.governor = "performance";
    r.energy = {20.0, 3.2, 23.2};
    r.operational_avg_g = 12795.4;
    r.operational_marg_g = 18823.9;
    r.embodied_g = 117.89;
    r.reserved_memory_energy_kwh = 1.49;
    r.reserved_memory_emissions_g = 817.55;
    r.reserved_share = 0.06;
    return r;
}

} // namespace

TEST_CASE("footprint CSV uses the documented header and two decimals") {
    std::string csv = render_result(footprint_to_json_text(sample_report()), "csv");
    CHECK(csv == "workflow,resources,energy_kwh,avg_g,marg_g,emb_g\n"
                 "demo_wf,atlantis x8,23.20,12795.40,18823.90,117.89\n");
    std::string reserved = render_result(footprint_to_json_text(sample_report()), "reserved_csv");
    CHECK(reserved == "workflow,resources,reserved_energy_kwh,reserved_avg_g,overall_share_pct\n"
                      "demo_wf,atlantis x8,1.49,817.55,6.0\n");
}

TEST_CASE("missing marginal column renders as an empty field") {
    FootprintReport r = sample_report();
    r.operational_marg_g.reset();
    std::string csv = render_result(footprint_to_json_text(r), "csv");
    CHECK(csv.find(",12795.40,,117.89") != std::string::npos);
}

TEST_CASE("rendering is byte-stable") {
    std::string j = footprint_to_json_text(sample_report());
    CHECK(render_result(j, "csv") == render_result(j, "csv"));
    CHECK(render_result(j, "json") == render_result(j, "json"));
}

TEST_CASE("reduction grid renders CSV with months as rows and windows as columns") {
    ReductionGrid grid;
    grid.year = 2024;
    grid.region = "GB";
    grid.signal = SignalKind::average;
    grid.workflow_name = "demo";
    grid.window_hours = {6, 96};
    grid.entire.assign(12, {0.1, 0.5});
    grid.interrupted.assign(12, {0.2, 0.6});
    grid.interrupted[2][0] = std::nullopt; // infeasible cell
    for (int m = 1; m <= 12; ++m) grid.anchors_ms.push_back(second_monday_ms(2024, m));

    std::string csv = render_result(grid_to_json_text(grid), "csv:entire");
    CHECK(csv.substr(0, 12) == "month,w6,w96");
    CHECK(csv.find("\n1,0.1000,0.5000\n") != std::string::npos);
    std::string icsv = render_result(grid_to_json_text(grid), "csv:interrupted");
    CHECK(icsv.find("\n3,,0.6000\n") != std::string::npos); // empty infeasible cell

    nlohmann::json heatmap = nlohmann::json::parse(render_result(grid_to_json_text(grid), "heatmap_json"));
    CHECK(heatmap["kind"] == "heatmap");
    CHECK(heatmap["x_months"].size() == 12);
    CHECK(heatmap["entire"].size() == 12);
    nlohmann::json bars = nlohmann::json::parse(render_result(grid_to_json_text(grid), "bars_json"));
    CHECK(bars["kind"] == "bars");
    CHECK(bars["values"][0][1] == 0.6);
}

TEST_CASE("scenario CSV separates cloud rows and carries min_* columns") {
    ScenarioResult result;
    result.scenario = "nodes";
    result.series_labels = {"avg_GB"};
    ScenarioRow cloud;
    cloud.subject = "build";
    cloud.variant = "gcp-x";
    cloud.group = "cloud";
    cloud.low_confidence = true;
    cloud.runtime_h = 0.1;
    cloud.energy_kwh = 0.001;
    cloud.emissions_g = {0.5};
    cloud.embodied_g = 0.05;
    cloud.min_emissions = {true};
    ScenarioRow local = cloud;
    local.variant = "sherwood";
    local.group = "cluster";
    local.low_confidence = false;
    local.min_runtime = true;
    result.rows = {cloud, local};

    std::string csv = render_result(scenario_to_json_text(result), "csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "subject,variant,group,low_confidence,runtime_h,energy_kwh,avg_GB_g,emb_g,"
          "min_runtime,min_energy,min_avg_GB,min_emb");
    // cluster row first, cloud row afterwards
    std::size_t sherwood_pos = csv.find("sherwood");
    std::size_t cloud_pos = csv.find("gcp-x");
    CHECK(sherwood_pos < cloud_pos);
    CHECK(csv.find("gcp-x,cloud,true") != std::string::npos);
}

TEST_CASE("render rejects mismatched formats") {
    CHECK_THROWS_AS(render_result(footprint_to_json_text(sample_report()), "heatmap_json"), Error);
    CHECK_THROWS_AS(render_result("{nonsense", "json"), Error);
}

TEST_CASE("format_fixed") {
    CHECK(format_fixed(1.005, 2) == "1.00"); // binary 1.005 is just below
    CHECK(format_fixed(12795.4, 2) == "12795.40");
    CHECK(format_fixed(0.85, 4) == "0.8500");
    CHECK(format_fixed(-1.5, 0) == "-2");
}
