#include "cawsim/power.hpp"

#include "cawsim/error.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace cawsim;
using namespace cawtest;

TEST_CASE("idle identity: zero utilization at full allocation draws p_idle") {
    NodeCatalog catalog = simple_catalog();
    const NodeSpec& n = catalog.at("n1"); // p_idle 80, p_max 280, 16 cores
    TaskRecord t = make_task("t", 0, 3600, 0.0, 16, 0.0);
    CHECK(task_power_kw(t, n, "performance") == doctest::Approx(0.080).epsilon(1e-12));
}

TEST_CASE("full-load identity: 100% on all cores draws p_max") {
    NodeCatalog catalog = simple_catalog();
    const NodeSpec& n = catalog.at("n1");
    TaskRecord t = make_task("t", 0, 3600, 1600.0, 16, 0.0);
    CHECK(task_power_kw(t, n, "performance") == doctest::Approx(0.280).epsilon(1e-12));
}

TEST_CASE("worked example: 4 cores allocated, 200%cpu, 8 GB on a 80/280 W node") {
    NodeCatalog catalog = simple_catalog();
    const NodeSpec& n = catalog.at("n1");
    TaskRecord t = make_task("t", 0, 3600, 200.0, 4, 8.0);
    // (80*4/16 + 200*2/16)/1000 + 0.392*8/1000 = 0.045 + 0.003136
    CHECK(task_power_kw(t, n, "performance") == doctest::Approx(0.048136).epsilon(1e-12));
    CHECK(task_power_kw(t, n, "performance") == doctest::Approx(0.04814).epsilon(1e-4));
    CHECK(task_power_kw(t, n, "performance") ==
          doctest::Approx(oracle_task_power_kw(t, n, "performance")).epsilon(1e-12));
}

TEST_CASE("unknown governor is an error") {
    NodeCatalog catalog = simple_catalog();
    TaskRecord t = make_task("t", 0, 3600, 100.0, 4, 1.0);
    CHECK_THROWS_AS(task_power_kw(t, catalog.at("n1"), "turbo"), Error);
}

TEST_CASE("task energy") {
    NodeCatalog catalog = simple_catalog();
    const NodeSpec& n = catalog.at("n1");
    SUBCASE("zero duration gives an all-zero breakdown") {
        TaskRecord t = make_task("t", 0, 0.0, 400.0, 8, 8.0);
        EnergyBreakdown e = task_energy(t, n, "performance");
        CHECK(e.cpu_kwh == 0.0);
        CHECK(e.memory_kwh == 0.0);
        CHECK(e.total_kwh == 0.0);
    }
    SUBCASE("one hour at p_max, full allocation, no memory") {
        TaskRecord t = make_task("t", 0, 3600.0, 1600.0, 16, 0.0);
        EnergyBreakdown e = task_energy(t, n, "performance");
        CHECK(e.cpu_kwh == doctest::Approx(0.280).epsilon(1e-12));
        CHECK(e.memory_kwh == 0.0);
    }
    SUBCASE("total equals cpu + memory to 1e-12 relative") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            TaskRecord t = make_task("t", 0, u(rng) * 10000.0, u(rng) * 400.0, 4,
                                     u(rng) * 32.0);
            EnergyBreakdown e = task_energy(t, n, "performance");
            CHECK(e.total_kwh == doctest::Approx(e.cpu_kwh + e.memory_kwh).epsilon(1e-12));
        }
    }
}

TEST_CASE("energy is monotone in duration, utilization and memory") {
    NodeCatalog catalog = simple_catalog();
    const NodeSpec& n = catalog.at("n1");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double dur = u(rng) * 5000.0, pct = u(rng) * 390.0, mem = u(rng) * 30.0;
        TaskRecord base = make_task("t", 0, dur, pct, 4, mem);
        EnergyBreakdown e0 = task_energy(base, n, "performance");

        TaskRecord longer = base;
        longer.duration_s += 1.0 + u(rng) * 100.0;
        CHECK(task_energy(longer, n, "performance").total_kwh >= e0.total_kwh);

        TaskRecord busier = base;
        busier.cpu_utilization_pct += u(rng) * 10.0;
        CHECK(task_energy(busier, n, "performance").total_kwh >= e0.total_kwh);

        TaskRecord fatter = base;
        fatter.memory_allocated_b += 1073741824;
        CHECK(task_energy(fatter, n, "performance").total_kwh >= e0.total_kwh);
    }
}

TEST_CASE("identical curves under different governor names give identical energy") {
    NodeCatalog catalog;
    NodeSpec n;
    n.node_id = "twin";
    n.cpus_total = 8;
    n.memory_total_b = 1073741824;
    n.lca_emissions_g = 1.0;
    n.governors["performance"] = {50.0, 150.0, 0.392};
    n.governors["powersave"] = {50.0, 150.0, 0.392};
    catalog.add(n);
    TaskRecord t = make_task("t", 0, 1234.0, 321.0, 4, 3.0, "twin");
    CHECK(task_energy(t, catalog.at("twin"), "performance") ==
          task_energy(t, catalog.at("twin"), "powersave"));
}

TEST_CASE("reserved memory energy") {
    NodeCatalog catalog;
    NodeSpec n;
    n.node_id = "mem32";
    n.cpus_total = 8;
    n.memory_total_b = std::int64_t{32} * 1073741824;
    n.governors["performance"] = {10.0, 100.0, 0.392};
    catalog.add(n);

    SUBCASE("1 node, 32 GB, 0.392 W/GB, 10 h") {
        WorkflowTrace t =
            make_trace({make_task("a", 0, 36000.0, 100.0, 4, 1.0, "mem32")}, catalog, "w", "mem32");
        CHECK(reserved_memory_energy_kwh(t, catalog) == doctest::Approx(0.12544).epsilon(1e-12));
    }
    SUBCASE("8 x 128 GB over 3.71 h") {
        NodeSpec big;
        big.node_id = "mem128";
        big.cpus_total = 32;
        big.memory_total_b = std::int64_t{128} * 1073741824;
        big.governors["performance"] = {10.0, 100.0, 0.392};
        catalog.add(big);
        WorkflowTrace t = make_trace({make_task("a", 0, 3.71 * 3600.0, 100.0, 4, 1.0, "mem128")},
                                     catalog, "w", "mem128 x8");
        CHECK(reserved_memory_energy_kwh(t, catalog) == doctest::Approx(1.49).epsilon(0.005));
    }
    SUBCASE("8 x 256 GB over the makespan that yields 5.53 kWh") {
        NodeSpec big;
        big.node_id = "mem256";
        big.cpus_total = 32;
        big.memory_total_b = std::int64_t{256} * 1073741824;
        big.governors["performance"] = {10.0, 100.0, 0.392};
        catalog.add(big);
        double makespan_h = 5.53 * 1000.0 / (8.0 * 0.392 * 256.0);
        WorkflowTrace t =
            make_trace({make_task("a", 0, makespan_h * 3600.0, 100.0, 4, 1.0, "mem256")}, catalog,
                       "w", "mem256 x8");
        CHECK(reserved_memory_energy_kwh(t, catalog) == doctest::Approx(5.53).epsilon(1e-6));
    }
}

TEST_CASE("cluster idle power sums reserved nodes") {
    NodeCatalog catalog = simple_catalog();
    WorkflowTrace t = make_trace({make_task("a", 0, 3600.0, 100.0, 4, 1.0)}, catalog, "w", "n1 x4");
    CHECK(cluster_idle_power_kw(t, catalog, "performance") == doctest::Approx(0.32).epsilon(1e-12));
    CHECK(cluster_idle_power_kw(t, catalog, "powersave") == doctest::Approx(0.24).epsilon(1e-12));
}
