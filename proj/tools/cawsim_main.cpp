// cawsim command-line front end. Talks to the simulation core exclusively
// through the C API in cawsim/capi.h; all file formats and numbers are
// produced by the library so outputs stay byte-stable.

#include <cawsim/capi.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Fixed per-region UTC offsets (minutes) for local-time anchors. DST is
// deliberately ignored so runs are reproducible.
const std::map<std::string, int>& region_offsets() {
    static const std::map<std::string, int> offsets = {
        {"GB", 0},   {"DE", 60},  {"CA", -480}, {"TX", -360},
        {"ZA", 120}, {"JP", 540}, {"NSW", 600},
    };
    return offsets;
}

[[noreturn]] void die(caw_status status, const std::string& message) {
    json record{{"error", caw_status_name(status)}, {"message", message}};
    std::fprintf(stderr, "%s\n", record.dump().c_str());
    std::exit(status == CAW_OK ? 1 : static_cast<int>(status));
}

void flush_warnings() {
    char* w = caw_take_warnings_json();
    if (!w) return;
    try {
        for (const auto& item : json::parse(w))
            std::fprintf(stderr, "warning: %s\n", item.get<std::string>().c_str());
    } catch (...) {
    }
    caw_string_free(w);
}

void check(caw_status status) {
    flush_warnings();
    if (status != CAW_OK) die(status, caw_last_error());
}

struct CatalogDeleter {
    void operator()(caw_catalog* c) const { caw_catalog_free(c); }
};
struct TraceDeleter {
    void operator()(caw_trace* t) const { caw_trace_free(t); }
};
struct SeriesDeleter {
    void operator()(caw_series* s) const { caw_series_free(s); }
};
using CatalogPtr = std::unique_ptr<caw_catalog, CatalogDeleter>;
using TracePtr = std::unique_ptr<caw_trace, TraceDeleter>;
using SeriesPtr = std::unique_ptr<caw_series, SeriesDeleter>;

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { caw_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string{}; }
};

// Shared options. A JSON config file may provide any of these; explicit
// command-line flags win.
struct CommonOpts {
    std::string config_path;
    std::string catalog_path;
    std::string trace_path;
    std::string out_dir = ".";
    std::string format = "both"; // csv | json | both
    std::string governor = "performance";
    std::string region;
    std::string workflow_name;
    std::string cluster;
    std::string default_node;
    bool fill_gaps = false;
};

struct ConfigBinder {
    json cfg = json::object();
    std::vector<std::pair<CLI::Option*, std::function<void()>>> binds;

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) die(CAW_ERR_IO, "cannot open config file '" + path + "'");
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            die(CAW_ERR_BAD_FORMAT, "config file '" + path + "': " + e.what());
        }
    }

    template <typename T>
    void bind(CLI::Option* opt, const std::string& key, T* target) {
        binds.emplace_back(opt, [this, key, target] {
            if (cfg.contains(key)) *target = cfg.at(key).get<T>();
        });
    }

    void apply() {
        for (auto& [opt, setter] : binds)
            if (opt->count() == 0) setter();
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts, ConfigBinder& binder, bool needs_trace = true) {
    cmd->add_option("--config", opts.config_path, "JSON config file; explicit flags win");
    binder.bind(cmd->add_option("--catalog", opts.catalog_path, "node catalog JSON file"),
                "catalog", &opts.catalog_path);
    if (needs_trace)
        binder.bind(cmd->add_option("--trace", opts.trace_path, "workflow trace (.tsv or .json)"),
                    "trace", &opts.trace_path);
    binder.bind(cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str(),
                "out", &opts.out_dir);
    binder.bind(cmd->add_option("--format", opts.format, "output format: csv, json or both")
                    ->check(CLI::IsMember({"csv", "json", "both"}))
                    ->capture_default_str(),
                "format", &opts.format);
    binder.bind(cmd->add_option("--governor", opts.governor, "processor governor")
                    ->capture_default_str(),
                "governor", &opts.governor);
    binder.bind(
        cmd->add_option("--region", opts.region, "region code (GB, DE, CA, TX, ZA, JP, NSW)"),
        "region", &opts.region);
    binder.bind(cmd->add_option("--workflow-name", opts.workflow_name, "override workflow name"),
                "workflow_name", &opts.workflow_name);
    binder.bind(
        cmd->add_option("--cluster", opts.cluster, "reserved cluster, e.g. \"atlantis x8\""),
        "cluster", &opts.cluster);
    binder.bind(cmd->add_option("--default-node", opts.default_node,
                                "node id for traces without a node column"),
                "default_node", &opts.default_node);
    binder.bind(cmd->add_flag("--fill-gaps", opts.fill_gaps,
                              "forward-fill gaps in CI series (default: gaps are errors)"),
                "fill_gaps", &opts.fill_gaps);
}

int resolve_utc_offset(const std::string& region, const std::optional<int>& explicit_offset) {
    if (explicit_offset) return *explicit_offset;
    auto it = region_offsets().find(region);
    if (it == region_offsets().end()) {
        std::string known;
        for (const auto& [code, off] : region_offsets())
            known += (known.empty() ? "" : ", ") + code;
        die(CAW_ERR_INVALID_ARGUMENT, "unknown region code '" + region + "' (known: " + known +
                                          "; pass --utc-offset-minutes to use another region)");
    }
    return it->second;
}

void validate_region(const std::string& region, const std::optional<int>& explicit_offset) {
    if (region.empty()) die(CAW_ERR_INVALID_ARGUMENT, "a region code is required (--region)");
    if (!explicit_offset) (void)resolve_utc_offset(region, std::nullopt);
}

std::string ci_path_for(const std::string& ci_dir, const std::string& region,
                        const std::string& kind, int year) {
    return ci_dir + "/" + region + "_" + kind + "_" + std::to_string(year) + ".csv";
}

CatalogPtr load_catalog_checked(const CommonOpts& opts) {
    if (opts.catalog_path.empty())
        die(CAW_ERR_INVALID_ARGUMENT, "a node catalog is required (--catalog)");
    caw_catalog* catalog = nullptr;
    check(caw_catalog_load(opts.catalog_path.c_str(), &catalog));
    return CatalogPtr(catalog);
}

std::string trace_options_json(const CommonOpts& opts) {
    json j = json::object();
    if (!opts.workflow_name.empty()) j["workflow_name"] = opts.workflow_name;
    if (!opts.cluster.empty()) j["cluster"] = opts.cluster;
    if (!opts.region.empty()) j["region"] = opts.region;
    if (!opts.default_node.empty()) j["default_node"] = opts.default_node;
    return j.dump();
}

TracePtr load_trace_checked(const CommonOpts& opts, const caw_catalog* catalog,
                            const std::string& path) {
    if (path.empty()) die(CAW_ERR_INVALID_ARGUMENT, "a workflow trace is required (--trace)");
    caw_trace* trace = nullptr;
    check(caw_trace_load(path.c_str(), catalog, trace_options_json(opts).c_str(), &trace));
    return TracePtr(trace);
}

SeriesPtr load_series_checked(const std::string& path, const std::string& region,
                              const std::string& kind, bool fill_gaps) {
    caw_series* series = nullptr;
    check(caw_series_load(path.c_str(), region.c_str(), kind.c_str(), fill_gaps ? 1 : 0, &series));
    return SeriesPtr(series);
}

std::string trace_region_or(const caw_trace* trace, const std::string& explicit_region) {
    if (!explicit_region.empty()) return explicit_region;
    OwnedString r;
    check(caw_trace_region(trace, &r.ptr));
    return r.str();
}

void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::string path = out_dir + "/" + name;
    check(caw_write_file(path.c_str(), content.c_str()));
    std::fprintf(stderr, "wrote %s\n", path.c_str());
}

std::string render_checked(const std::string& result_json, const std::string& format) {
    OwnedString text;
    check(caw_render(result_json.c_str(), format.c_str(), &text.ptr));
    return text.str();
}

std::vector<int> parse_windows(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (out.empty()) die(CAW_ERR_INVALID_ARGUMENT, "empty window list");
    return out;
}

struct ShiftArgs {
    CommonOpts common;
    std::string ci_file, ci_dir, signal = "average", anchor;
    int year = 2024, month = 0, window = 24;
    std::optional<int> utc_offset;
    bool overhead_spillover = false;
    bool no_idle_charge = false;
};

// REGION=path specs; a bare path uses the default region.
void load_labeled(const std::vector<std::string>& specs, const std::string& kind,
                  const std::string& default_region, bool fill, std::vector<SeriesPtr>& store,
                  std::vector<std::string>& labels, std::vector<const caw_series*>& ptrs) {
    for (const std::string& spec : specs) {
        std::string region = default_region, path = spec;
        std::size_t eq = spec.find('=');
        if (eq != std::string::npos) {
            region = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        }
        if (region.empty())
            die(CAW_ERR_INVALID_ARGUMENT,
                "CI file '" + path + "' needs a region (--region or REGION=path)");
        store.push_back(load_series_checked(path, region, kind, fill));
        labels.push_back((kind == "average" ? "avg_" : "marg_") + region);
        ptrs.push_back(store.back().get());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cawsim: trace-driven carbon footprint estimation and carbon-aware "
                 "shifting/scaling what-ifs for scientific workflows"};
    app.require_subcommand(1);

    // ---- footprint ----
    struct {
        CommonOpts common;
        std::string avg_ci, marg_ci, ci_dir;
        int year = 2024;
    } fp;
    ConfigBinder fp_cfg;
    CLI::App* footprint = app.add_subcommand(
        "footprint", "operational + embodied footprint of a trace at its original time");
    add_common(footprint, fp.common, fp_cfg);
    fp_cfg.bind(footprint->add_option("--avg-ci", fp.avg_ci, "average CI CSV file"), "avg_ci",
                &fp.avg_ci);
    fp_cfg.bind(footprint->add_option("--marg-ci", fp.marg_ci, "marginal CI CSV file"), "marg_ci",
                &fp.marg_ci);
    fp_cfg.bind(footprint->add_option("--ci-dir", fp.ci_dir,
                                      "directory with <region>_<kind>_<year>.csv files"),
                "ci_dir", &fp.ci_dir);
    fp_cfg.bind(footprint->add_option("--year", fp.year, "year used for --ci-dir lookups")
                    ->capture_default_str(),
                "year", &fp.year);

    // ---- shift-entire / shift-interrupt / sweep ----
    auto add_shift = [&](const char* name, const char* help, ShiftArgs& args,
                         ConfigBinder& binder) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, args.common, binder);
        binder.bind(cmd->add_option("--ci", args.ci_file, "CI CSV file"), "ci", &args.ci_file);
        binder.bind(cmd->add_option("--ci-dir", args.ci_dir,
                                    "directory with <region>_<kind>_<year>.csv files"),
                    "ci_dir", &args.ci_dir);
        binder.bind(cmd->add_option("--signal", args.signal, "CI signal: average or marginal")
                        ->check(CLI::IsMember({"average", "marginal"}))
                        ->capture_default_str(),
                    "signal", &args.signal);
        binder.bind(
            cmd->add_option("--anchor", args.anchor, "flexibility window start (ISO-8601 UTC)"),
            "anchor", &args.anchor);
        binder.bind(cmd->add_option("--year", args.year, "year for --month anchors")
                        ->capture_default_str(),
                    "year", &args.year);
        binder.bind(cmd->add_option("--month", args.month,
                                    "anchor at 9AM local, second Monday of this month"),
                    "month", &args.month);
        binder.bind(cmd->add_option("--window", args.window, "flexibility window length, hours")
                        ->capture_default_str(),
                    "window", &args.window);
        cmd->add_option_function<int>(
            "--utc-offset-minutes",
            [&args](const int& v) { args.utc_offset = v; },
            "fixed UTC offset for local anchors (overrides the region table)");
        binder.bind(cmd->add_flag("--overhead-spillover", args.overhead_spillover,
                                  "count only the spill past the window boundary as overhead"),
                    "overhead_spillover", &args.overhead_spillover);
        binder.bind(cmd->add_flag("--no-idle-charge", args.no_idle_charge,
                                  "do not charge idle power during interruptions"),
                    "no_idle_charge", &args.no_idle_charge);
        return cmd;
    };
    ShiftArgs se_args, si_args;
    ConfigBinder se_cfg, si_cfg;
    CLI::App* shift_entire_cmd =
        add_shift("shift-entire", "hour-by-hour start sweep of the whole workflow", se_args,
                  se_cfg);
    CLI::App* shift_interrupt_cmd =
        add_shift("shift-interrupt", "map hourly execution windows onto the lowest-CI intervals",
                  si_args, si_cfg);

    struct {
        ShiftArgs shift; // anchor/month unused
        std::string windows = "6,12,24,48,96";
        int jobs = 0;
        bool serial = false;
    } sw;
    ConfigBinder sw_cfg;
    CLI::App* sweep_cmd = add_shift(
        "sweep", "12-month x window-length reduction grid, both shifting modes", sw.shift, sw_cfg);
    sw_cfg.bind(sweep_cmd->add_option("--windows", sw.windows, "window lengths, hours (csv list)")
                    ->capture_default_str(),
                "windows", &sw.windows);
    sw_cfg.bind(sweep_cmd->add_option("--jobs", sw.jobs, "worker threads (0 = all cores)")
                    ->capture_default_str(),
                "jobs", &sw.jobs);
    sw_cfg.bind(sweep_cmd->add_flag("--serial", sw.serial, "force serial evaluation"), "serial",
                &sw.serial);

    // ---- scale-nodes ----
    struct {
        CommonOpts common;
        std::string measurements;
        std::vector<std::string> candidates;
        std::vector<std::string> avg_ci, marg_ci;
        int policy_year = 2024;
        int first_hour = 9, hour_step = 2;
        std::string fixed_start;
        std::optional<int> utc_offset;
    } sn;
    ConfigBinder sn_cfg;
    CLI::App* scale_nodes_cmd =
        app.add_subcommand("scale-nodes", "per-task what-ifs across candidate nodes");
    add_common(scale_nodes_cmd, sn.common, sn_cfg, /*needs_trace=*/false);
    sn_cfg.bind(scale_nodes_cmd->add_option("--measurements", sn.measurements,
                                            "per-(task, node) measurement trace"),
                "measurements", &sn.measurements);
    sn_cfg.bind(
        scale_nodes_cmd->add_option("--candidates", sn.candidates, "candidate node ids")
            ->delimiter(','),
        "candidates", &sn.candidates);
    sn_cfg.bind(scale_nodes_cmd
                    ->add_option("--avg-ci", sn.avg_ci, "average CI file(s), REGION=path or path")
                    ->delimiter(','),
                "avg_ci", &sn.avg_ci);
    sn_cfg.bind(scale_nodes_cmd
                    ->add_option("--marg-ci", sn.marg_ci,
                                 "marginal CI file(s), REGION=path or path")
                    ->delimiter(','),
                "marg_ci", &sn.marg_ci);
    sn_cfg.bind(scale_nodes_cmd
                    ->add_option("--policy-year", sn.policy_year,
                                 "year for median-day placements")
                    ->capture_default_str(),
                "policy_year", &sn.policy_year);
    sn_cfg.bind(scale_nodes_cmd
                    ->add_option("--first-hour", sn.first_hour,
                                 "local start hour of the first task")
                    ->capture_default_str(),
                "first_hour", &sn.first_hour);
    sn_cfg.bind(scale_nodes_cmd
                    ->add_option("--hour-step", sn.hour_step,
                                 "hours between consecutive task starts")
                    ->capture_default_str(),
                "hour_step", &sn.hour_step);
    sn_cfg.bind(scale_nodes_cmd->add_option("--fixed-start", sn.fixed_start,
                                            "single fixed start (ISO-8601) instead of monthly"),
                "fixed_start", &sn.fixed_start);
    scale_nodes_cmd->add_option_function<int>(
        "--utc-offset-minutes", [&](const int& v) { sn.utc_offset = v; },
        "fixed UTC offset for local start hours");

    // ---- scale-governors ----
    struct {
        CommonOpts common;
        std::vector<std::string> governors{"performance", "powersave"};
        std::vector<std::string> multipliers;     // name=factor
        std::vector<std::string> governor_traces; // name=path
        std::vector<std::string> avg_ci, marg_ci;
    } sg;
    ConfigBinder sg_cfg;
    CLI::App* scale_governors_cmd =
        app.add_subcommand("scale-governors", "whole-workflow governor comparison");
    add_common(scale_governors_cmd, sg.common, sg_cfg);
    sg_cfg.bind(scale_governors_cmd->add_option("--governors", sg.governors, "governor names")
                    ->delimiter(',')
                    ->capture_default_str(),
                "governors", &sg.governors);
    sg_cfg.bind(scale_governors_cmd
                    ->add_option("--multiplier", sg.multipliers,
                                 "measured runtime multiplier, name=factor")
                    ->delimiter(','),
                "multipliers", &sg.multipliers);
    sg_cfg.bind(scale_governors_cmd
                    ->add_option("--governor-trace", sg.governor_traces,
                                 "measured per-governor trace, name=path")
                    ->delimiter(','),
                "governor_traces", &sg.governor_traces);
    sg_cfg.bind(scale_governors_cmd
                    ->add_option("--avg-ci", sg.avg_ci, "average CI file(s), REGION=path or path")
                    ->delimiter(','),
                "avg_ci", &sg.avg_ci);
    sg_cfg.bind(scale_governors_cmd
                    ->add_option("--marg-ci", sg.marg_ci,
                                 "marginal CI file(s), REGION=path or path")
                    ->delimiter(','),
                "marg_ci", &sg.marg_ci);

    // ---- scale-cluster ----
    struct {
        CommonOpts common;
        std::vector<std::string> traces;
        std::vector<std::string> avg_ci, marg_ci;
    } sc;
    ConfigBinder sc_cfg;
    CLI::App* scale_cluster_cmd =
        app.add_subcommand("scale-cluster", "same workflow on different cluster sizes");
    add_common(scale_cluster_cmd, sc.common, sc_cfg, /*needs_trace=*/false);
    sc_cfg.bind(scale_cluster_cmd->add_option("--traces", sc.traces, "one trace per cluster size")
                    ->delimiter(','),
                "traces", &sc.traces);
    sc_cfg.bind(scale_cluster_cmd
                    ->add_option("--avg-ci", sc.avg_ci, "average CI file(s), REGION=path or path")
                    ->delimiter(','),
                "avg_ci", &sc.avg_ci);
    sc_cfg.bind(scale_cluster_cmd
                    ->add_option("--marg-ci", sc.marg_ci,
                                 "marginal CI file(s), REGION=path or path")
                    ->delimiter(','),
                "marg_ci", &sc.marg_ci);

    CLI11_PARSE(app, argc, argv);

    auto apply_config = [](CommonOpts& common, ConfigBinder& binder) {
        if (!common.config_path.empty()) {
            binder.load(common.config_path);
            binder.apply();
        }
    };

    // ---------------------------------------------------------------- footprint
    if (footprint->parsed()) {
        apply_config(fp.common, fp_cfg);
        CatalogPtr catalog = load_catalog_checked(fp.common);
        TracePtr trace = load_trace_checked(fp.common, catalog.get(), fp.common.trace_path);

        std::string region = trace_region_or(trace.get(), fp.common.region);
        std::string avg_path = fp.avg_ci, marg_path = fp.marg_ci;
        if (!fp.ci_dir.empty()) {
            validate_region(region, std::nullopt);
            if (avg_path.empty()) avg_path = ci_path_for(fp.ci_dir, region, "average", fp.year);
            if (marg_path.empty()) {
                std::string candidate = ci_path_for(fp.ci_dir, region, "marginal", fp.year);
                if (std::filesystem::exists(candidate)) marg_path = candidate;
            }
        }
        if (avg_path.empty() && marg_path.empty())
            die(CAW_ERR_INVALID_ARGUMENT, "need --avg-ci and/or --marg-ci (or --ci-dir)");

        SeriesPtr avg, marg;
        if (!avg_path.empty())
            avg = load_series_checked(avg_path, region, "average", fp.common.fill_gaps);
        if (!marg_path.empty())
            marg = load_series_checked(marg_path, region, "marginal", fp.common.fill_gaps);

        OwnedString result;
        check(caw_run_footprint(trace.get(), catalog.get(), fp.common.governor.c_str(), avg.get(),
                                marg.get(), &result.ptr));
        std::string rj = result.str();
        if (fp.common.format != "json") {
            emit(fp.common.out_dir, "footprint.csv", render_checked(rj, "csv"));
            emit(fp.common.out_dir, "reserved_memory.csv", render_checked(rj, "reserved_csv"));
        }
        if (fp.common.format != "csv")
            emit(fp.common.out_dir, "footprint.json", render_checked(rj, "json"));
        std::printf("%s", render_checked(rj, "csv").c_str());
        std::printf("%s", render_checked(rj, "reserved_csv").c_str());
        return 0;
    }

    // ---------------------------------------------------------------- shifting
    auto run_shift = [&](ShiftArgs& args, const char* mode) {
        CatalogPtr catalog = load_catalog_checked(args.common);
        TracePtr trace = load_trace_checked(args.common, catalog.get(), args.common.trace_path);

        std::string region = trace_region_or(trace.get(), args.common.region);
        std::string ci_path = args.ci_file;
        if (ci_path.empty()) {
            if (args.ci_dir.empty()) die(CAW_ERR_INVALID_ARGUMENT, "need --ci or --ci-dir");
            validate_region(region, args.utc_offset);
            ci_path = ci_path_for(args.ci_dir, region, args.signal, args.year);
        }
        SeriesPtr series =
            load_series_checked(ci_path, region, args.signal, args.common.fill_gaps);
        if (args.signal == "marginal") {
            // Shifting works on hourly granularity; marginal data is 5-minute.
            caw_series* hourly = nullptr;
            check(caw_series_resample_hourly(series.get(), &hourly));
            series.reset(hourly);
            std::fprintf(stderr, "note: marginal series resampled to hourly means\n");
        }

        int64_t anchor = 0;
        if (!args.anchor.empty()) {
            check(caw_parse_timestamp(args.anchor.c_str(), &anchor));
        } else if (args.month >= 1 && args.month <= 12) {
            int offset = resolve_utc_offset(region, args.utc_offset);
            check(caw_anchor_second_monday(args.year, args.month, 9, offset, &anchor));
        } else {
            die(CAW_ERR_INVALID_ARGUMENT, "need --anchor or --month");
        }

        json opts{{"overhead_spillover_only", args.overhead_spillover},
                  {"charge_idle", !args.no_idle_charge}};
        OwnedString result;
        check(caw_run_shift(trace.get(), catalog.get(), args.common.governor.c_str(),
                            series.get(), mode, anchor, args.window, opts.dump().c_str(),
                            &result.ptr));
        std::string rj = result.str();
        if (args.common.format != "json")
            emit(args.common.out_dir, "shift_plan.csv", render_checked(rj, "csv"));
        if (args.common.format != "csv")
            emit(args.common.out_dir, "shift_plan.json", render_checked(rj, "json"));

        json plan = json::parse(rj);
        std::printf("mode: %s\n", plan["mode"].get<std::string>().c_str());
        std::printf("anchor: %s  window: %dh\n", plan["anchor_utc"].get<std::string>().c_str(),
                    plan["window_length_h"].get<int>());
        std::printf("baseline: %.2f g\nprojected: %.2f g\nreduction: %.1f%%\n",
                    plan["baseline_emissions_g"].get<double>(),
                    plan["projected_emissions_g"].get<double>(),
                    plan["reduction"].get<double>() * 100.0);
        std::printf("chosen start: %s\n", plan["chosen_start_utc"].get<std::string>().c_str());
        if (plan["total_overhead_s"].get<double>() > 0.0)
            std::printf("interruption overhead: %.0f s (+%.2f g idle, +%.2f g embodied)\n",
                        plan["total_overhead_s"].get<double>(),
                        plan["overhead_emissions_g"].get<double>(),
                        plan["embodied_increase_g"].get<double>());
        return 0;
    };
    if (shift_entire_cmd->parsed()) {
        apply_config(se_args.common, se_cfg);
        return run_shift(se_args, "entire");
    }
    if (shift_interrupt_cmd->parsed()) {
        apply_config(si_args.common, si_cfg);
        return run_shift(si_args, "interrupted");
    }

    // ---------------------------------------------------------------- sweep
    if (sweep_cmd->parsed()) {
        apply_config(sw.shift.common, sw_cfg);
        ShiftArgs& args = sw.shift;
        CatalogPtr catalog = load_catalog_checked(args.common);
        TracePtr trace = load_trace_checked(args.common, catalog.get(), args.common.trace_path);

        std::string region = trace_region_or(trace.get(), args.common.region);
        int offset = resolve_utc_offset(region, args.utc_offset);
        std::string ci_path = args.ci_file;
        if (ci_path.empty()) {
            if (args.ci_dir.empty()) die(CAW_ERR_INVALID_ARGUMENT, "need --ci or --ci-dir");
            ci_path = ci_path_for(args.ci_dir, region, args.signal, args.year);
        }
        SeriesPtr series =
            load_series_checked(ci_path, region, args.signal, args.common.fill_gaps);
        if (args.signal == "marginal") {
            caw_series* hourly = nullptr;
            check(caw_series_resample_hourly(series.get(), &hourly));
            series.reset(hourly);
            std::fprintf(stderr, "note: marginal series resampled to hourly means\n");
        }

        std::vector<int> windows = parse_windows(sw.windows);
        unsigned threads = sw.serial ? 1u : static_cast<unsigned>(sw.jobs < 0 ? 0 : sw.jobs);
        json opts{{"utc_offset_minutes", offset},
                  {"anchor_hour_local", 9},
                  {"threads", threads},
                  {"overhead_spillover_only", args.overhead_spillover},
                  {"charge_idle", !args.no_idle_charge}};
        OwnedString result;
        check(caw_run_sweep(trace.get(), catalog.get(), args.common.governor.c_str(),
                            series.get(), args.year, windows.data(), windows.size(),
                            opts.dump().c_str(), &result.ptr));
        std::string rj = result.str();
        if (args.common.format != "json") {
            emit(args.common.out_dir, "sweep_entire.csv", render_checked(rj, "csv:entire"));
            emit(args.common.out_dir, "sweep_interrupted.csv",
                 render_checked(rj, "csv:interrupted"));
        }
        emit(args.common.out_dir, "sweep_heatmap.json", render_checked(rj, "heatmap_json"));
        emit(args.common.out_dir, "sweep_bars.json", render_checked(rj, "bars_json"));
        if (args.common.format != "csv")
            emit(args.common.out_dir, "sweep.json", render_checked(rj, "json"));

        std::printf("reduction grid (entire), %s %s %d:\n%s", region.c_str(),
                    args.signal.c_str(), args.year, render_checked(rj, "csv:entire").c_str());
        std::printf("reduction grid (interrupted):\n%s",
                    render_checked(rj, "csv:interrupted").c_str());
        return 0;
    }

    auto print_scenario = [&](const std::string& rj, const CommonOpts& common) {
        if (common.format != "json")
            emit(common.out_dir, "scenario.csv", render_checked(rj, "csv"));
        if (common.format != "csv")
            emit(common.out_dir, "scenario.json", render_checked(rj, "json"));
        std::printf("%s", render_checked(rj, "csv").c_str());
    };

    // ------------------------------------------------------------- scale-nodes
    if (scale_nodes_cmd->parsed()) {
        apply_config(sn.common, sn_cfg);
        CatalogPtr catalog = load_catalog_checked(sn.common);
        if (sn.measurements.empty())
            die(CAW_ERR_INVALID_ARGUMENT, "a measurement trace is required (--measurements)");
        if (sn.candidates.empty())
            die(CAW_ERR_INVALID_ARGUMENT, "candidate nodes are required (--candidates)");
        CommonOpts measurement_opts = sn.common;
        measurement_opts.cluster.clear(); // measurement rows are not a reserved cluster
        TracePtr measurements =
            load_trace_checked(measurement_opts, catalog.get(), sn.measurements);

        if (!sn.common.region.empty()) validate_region(sn.common.region, sn.utc_offset);
        std::vector<SeriesPtr> store;
        std::vector<std::string> labels;
        std::vector<const caw_series*> ptrs;
        load_labeled(sn.avg_ci, "average", sn.common.region, sn.common.fill_gaps, store, labels,
                     ptrs);
        load_labeled(sn.marg_ci, "marginal", sn.common.region, sn.common.fill_gaps, store, labels,
                     ptrs);
        if (ptrs.empty()) die(CAW_ERR_INVALID_ARGUMENT, "need at least one CI series (--avg-ci)");

        int offset =
            sn.common.region.empty() && !sn.utc_offset
                ? 0
                : resolve_utc_offset(sn.common.region, sn.utc_offset);
        json policy{{"year", sn.policy_year},
                    {"utc_offset_minutes", offset},
                    {"first_hour_local", sn.first_hour},
                    {"hour_step", sn.hour_step}};
        if (!sn.fixed_start.empty()) {
            int64_t fixed = 0;
            check(caw_parse_timestamp(sn.fixed_start.c_str(), &fixed));
            policy["fixed_start_utc_ms"] = fixed;
        }
        json options{{"candidates", sn.candidates}, {"policy", policy}};
        std::vector<const char*> label_ptrs;
        for (const std::string& l : labels) label_ptrs.push_back(l.c_str());

        OwnedString result;
        check(caw_run_scale_nodes(measurements.get(), catalog.get(), sn.common.governor.c_str(),
                                  ptrs.data(), label_ptrs.data(), ptrs.size(),
                                  options.dump().c_str(), &result.ptr));
        print_scenario(result.str(), sn.common);
        return 0;
    }

    // --------------------------------------------------------- scale-governors
    if (scale_governors_cmd->parsed()) {
        apply_config(sg.common, sg_cfg);
        CatalogPtr catalog = load_catalog_checked(sg.common);
        TracePtr base = load_trace_checked(sg.common, catalog.get(), sg.common.trace_path);

        auto parse_kv = [](const std::vector<std::string>& items, const char* what) {
            std::map<std::string, std::string> out;
            for (const std::string& item : items) {
                std::size_t eq = item.find('=');
                if (eq == std::string::npos)
                    die(CAW_ERR_INVALID_ARGUMENT,
                        std::string(what) + " must be name=value, got '" + item + "'");
                out[item.substr(0, eq)] = item.substr(eq + 1);
            }
            return out;
        };
        std::map<std::string, std::string> multipliers = parse_kv(sg.multipliers, "--multiplier");
        std::map<std::string, std::string> gov_traces =
            parse_kv(sg.governor_traces, "--governor-trace");

        json governors = json::array();
        std::vector<TracePtr> trace_store;
        std::vector<const caw_trace*> trace_ptrs;
        for (const std::string& name : sg.governors) {
            json g{{"name", name}};
            if (auto it = multipliers.find(name); it != multipliers.end())
                g["runtime_multiplier"] = std::stod(it->second);
            governors.push_back(g);
            if (auto it = gov_traces.find(name); it != gov_traces.end()) {
                trace_store.push_back(
                    load_trace_checked(sg.common, catalog.get(), it->second));
                trace_ptrs.push_back(trace_store.back().get());
            } else {
                trace_ptrs.push_back(nullptr);
            }
        }

        std::vector<SeriesPtr> store;
        std::vector<std::string> labels;
        std::vector<const caw_series*> ptrs;
        load_labeled(sg.avg_ci, "average", sg.common.region, sg.common.fill_gaps, store, labels,
                     ptrs);
        load_labeled(sg.marg_ci, "marginal", sg.common.region, sg.common.fill_gaps, store, labels,
                     ptrs);
        if (ptrs.empty()) die(CAW_ERR_INVALID_ARGUMENT, "need at least one CI series (--avg-ci)");
        std::vector<const char*> label_ptrs;
        for (const std::string& l : labels) label_ptrs.push_back(l.c_str());

        json options{{"governors", governors}};
        OwnedString result;
        check(caw_run_scale_governors(base.get(), catalog.get(), ptrs.data(), label_ptrs.data(),
                                      ptrs.size(), options.dump().c_str(), trace_ptrs.data(),
                                      &result.ptr));
        print_scenario(result.str(), sg.common);
        return 0;
    }

    // ----------------------------------------------------------- scale-cluster
    if (scale_cluster_cmd->parsed()) {
        apply_config(sc.common, sc_cfg);
        CatalogPtr catalog = load_catalog_checked(sc.common);
        if (sc.traces.empty())
            die(CAW_ERR_INVALID_ARGUMENT, "cluster-size traces are required (--traces)");
        std::vector<TracePtr> trace_store;
        std::vector<const caw_trace*> trace_ptrs;
        for (const std::string& path : sc.traces) {
            CommonOpts per_trace = sc.common;
            per_trace.cluster.clear(); // each size carries its own cluster metadata
            per_trace.workflow_name.clear();
            trace_store.push_back(load_trace_checked(per_trace, catalog.get(), path));
            trace_ptrs.push_back(trace_store.back().get());
        }

        std::vector<SeriesPtr> store;
        std::vector<std::string> labels;
        std::vector<const caw_series*> ptrs;
        load_labeled(sc.avg_ci, "average", sc.common.region, sc.common.fill_gaps, store, labels,
                     ptrs);
        load_labeled(sc.marg_ci, "marginal", sc.common.region, sc.common.fill_gaps, store, labels,
                     ptrs);
        if (ptrs.empty()) die(CAW_ERR_INVALID_ARGUMENT, "need at least one CI series (--avg-ci)");
        std::vector<const char*> label_ptrs;
        for (const std::string& l : labels) label_ptrs.push_back(l.c_str());

        OwnedString result;
        check(caw_run_scale_cluster(trace_ptrs.data(), trace_ptrs.size(), catalog.get(),
                                    sc.common.governor.c_str(), ptrs.data(), label_ptrs.data(),
                                    ptrs.size(), &result.ptr));
        print_scenario(result.str(), sc.common);
        return 0;
    }

    return 0;
}
