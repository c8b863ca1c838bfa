#include "cawsim/capi.h"

#include "cawsim/error.hpp"
#include "cawsim/report.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

using nlohmann::json;

struct caw_catalog {
    cawsim::NodeCatalog impl;
};
struct caw_trace {
    cawsim::WorkflowTrace impl;
};
struct caw_series {
    cawsim::CiSeries impl;
};

namespace {

thread_local std::string t_last_error;
thread_local std::vector<std::string> t_warnings;

caw_status map_code(cawsim::ErrorCode code) {
    using cawsim::ErrorCode;
    switch (code) {
        case ErrorCode::io_error: return CAW_ERR_IO;
        case ErrorCode::bad_format: return CAW_ERR_BAD_FORMAT;
        case ErrorCode::missing_column: return CAW_ERR_MISSING_COLUMN;
        case ErrorCode::unparseable_value: return CAW_ERR_UNPARSEABLE_VALUE;
        case ErrorCode::empty_trace: return CAW_ERR_EMPTY_TRACE;
        case ErrorCode::unknown_node: return CAW_ERR_UNKNOWN_NODE;
        case ErrorCode::unknown_governor: return CAW_ERR_UNKNOWN_GOVERNOR;
        case ErrorCode::negative_intensity: return CAW_ERR_NEGATIVE_INTENSITY;
        case ErrorCode::gap_detected: return CAW_ERR_GAP_DETECTED;
        case ErrorCode::out_of_range: return CAW_ERR_OUT_OF_RANGE;
        case ErrorCode::infeasible_window: return CAW_ERR_INFEASIBLE_WINDOW;
        case ErrorCode::missing_variant_trace: return CAW_ERR_MISSING_VARIANT_TRACE;
        case ErrorCode::invalid_argument: return CAW_ERR_INVALID_ARGUMENT;
        case ErrorCode::internal: return CAW_ERR_INTERNAL;
    }
    return CAW_ERR_INTERNAL;
}

template <typename Fn>
caw_status guarded(Fn&& fn) {
    t_last_error.clear();
    t_warnings.clear();
    try {
        fn();
        return CAW_OK;
    } catch (const cawsim::Error& e) {
        t_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CAW_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return CAW_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool cond, const char* what) {
    if (!cond) cawsim::fail(cawsim::ErrorCode::invalid_argument, what);
}

json parse_options(const char* options_json) {
    if (!options_json || !*options_json) return json::object();
    try {
        return json::parse(options_json);
    } catch (const json::exception& e) {
        cawsim::fail(cawsim::ErrorCode::invalid_argument,
                     std::string("options are not valid JSON: ") + e.what());
    }
}

cawsim::ShiftOptions shift_options_from(const json& j) {
    cawsim::ShiftOptions o;
    o.overhead_spillover_only = j.value("overhead_spillover_only", false);
    o.charge_idle = j.value("charge_idle", true);
    return o;
}

std::vector<cawsim::LabeledSeries> labeled_series(const caw_series* const* series,
                                                  const char* const* labels, size_t n) {
    require(n == 0 || (series && labels), "series/labels arrays are null");
    std::vector<cawsim::LabeledSeries> out;
    for (size_t i = 0; i < n; ++i) {
        require(series[i] != nullptr && labels[i] != nullptr, "null series or label");
        out.push_back({labels[i], &series[i]->impl});
    }
    return out;
}

} // namespace

extern "C" {

const char* caw_status_name(caw_status status) {
    switch (status) {
        case CAW_OK: return "ok";
        case CAW_ERR_IO: return "io_error";
        case CAW_ERR_BAD_FORMAT: return "bad_format";
        case CAW_ERR_MISSING_COLUMN: return "missing_column";
        case CAW_ERR_UNPARSEABLE_VALUE: return "unparseable_value";
        case CAW_ERR_EMPTY_TRACE: return "empty_trace";
        case CAW_ERR_UNKNOWN_NODE: return "unknown_node";
        case CAW_ERR_UNKNOWN_GOVERNOR: return "unknown_governor";
        case CAW_ERR_NEGATIVE_INTENSITY: return "negative_intensity";
        case CAW_ERR_GAP_DETECTED: return "gap_detected";
        case CAW_ERR_OUT_OF_RANGE: return "out_of_range";
        case CAW_ERR_INFEASIBLE_WINDOW: return "infeasible_window";
        case CAW_ERR_MISSING_VARIANT_TRACE: return "missing_variant_trace";
        case CAW_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CAW_ERR_INTERNAL: return "internal";
    }
    return "internal";
}

const char* caw_last_error(void) { return t_last_error.c_str(); }

char* caw_take_warnings_json(void) {
    if (t_warnings.empty()) return nullptr;
    json arr = json::array();
    for (const std::string& w : t_warnings) arr.push_back(w);
    t_warnings.clear();
    return dup_string(arr.dump());
}

void caw_string_free(char* s) { std::free(s); }

caw_status caw_catalog_load(const char* path, caw_catalog** out) {
    return guarded([&] {
        require(path && out, "null argument");
        auto* handle = new caw_catalog{cawsim::load_catalog(path)};
        *out = handle;
    });
}

void caw_catalog_free(caw_catalog* catalog) { delete catalog; }

caw_status caw_trace_load(const char* path, const caw_catalog* catalog, const char* options_json,
                          caw_trace** out) {
    return guarded([&] {
        require(path && catalog && out, "null argument");
        json j = parse_options(options_json);
        cawsim::TraceOptions opts;
        if (j.contains("workflow_name") && !j["workflow_name"].is_null())
            opts.workflow_name = j["workflow_name"].get<std::string>();
        if (j.contains("cluster") && !j["cluster"].is_null())
            opts.cluster = j["cluster"].get<std::string>();
        if (j.contains("region") && !j["region"].is_null())
            opts.region = j["region"].get<std::string>();
        if (j.contains("default_node") && !j["default_node"].is_null())
            opts.default_node = j["default_node"].get<std::string>();
        auto* handle = new caw_trace{cawsim::parse_trace(path, catalog->impl, opts)};
        t_warnings = handle->impl.warnings;
        *out = handle;
    });
}

void caw_trace_free(caw_trace* trace) { delete trace; }

caw_status caw_trace_to_json(const caw_trace* trace, char** out_json) {
    return guarded([&] {
        require(trace && out_json, "null argument");
        *out_json = dup_string(cawsim::trace_to_json_text(trace->impl));
    });
}

caw_status caw_trace_stats(const caw_trace* trace, size_t* task_count, double* makespan_s,
                           int64_t* origin_start_utc_ms) {
    return guarded([&] {
        require(trace != nullptr, "null trace");
        if (task_count) *task_count = trace->impl.tasks.size();
        if (makespan_s) *makespan_s = cawsim::makespan_seconds(trace->impl);
        if (origin_start_utc_ms) *origin_start_utc_ms = trace->impl.origin_start_ms;
    });
}

caw_status caw_trace_region(const caw_trace* trace, char** out_region) {
    return guarded([&] {
        require(trace && out_region, "null argument");
        *out_region = dup_string(trace->impl.origin_region);
    });
}

caw_status caw_series_load(const char* path, const char* region, const char* kind, int fill_gaps,
                           caw_series** out) {
    return guarded([&] {
        require(path && region && kind && out, "null argument");
        cawsim::CiLoadOptions opts;
        opts.fill_gaps = fill_gaps != 0;
        auto* handle = new caw_series{
            cawsim::load_ci(path, region, cawsim::parse_signal_kind(kind), opts)};
        t_warnings = handle->impl.warnings;
        *out = handle;
    });
}

void caw_series_free(caw_series* series) { delete series; }

caw_status caw_series_resample_hourly(const caw_series* series, caw_series** out) {
    return guarded([&] {
        require(series && out, "null argument");
        auto* handle = new caw_series{cawsim::resample_hourly(series->impl)};
        t_warnings = handle->impl.warnings;
        *out = handle;
    });
}

caw_status caw_series_value_at(const caw_series* series, int64_t utc_ms, double* out_ci) {
    return guarded([&] {
        require(series && out_ci, "null argument");
        *out_ci = cawsim::ci_at(series->impl, utc_ms);
    });
}

caw_status caw_series_integrate(const caw_series* series, int64_t start_utc_ms,
                                int64_t end_utc_ms, double power_kw, double* out_g) {
    return guarded([&] {
        require(series && out_g, "null argument");
        *out_g = cawsim::integrate_emissions(series->impl, start_utc_ms, end_utc_ms, power_kw);
    });
}

caw_status caw_parse_timestamp(const char* text, int64_t* out_utc_ms) {
    return guarded([&] {
        require(text && out_utc_ms, "null argument");
        *out_utc_ms = cawsim::parse_timestamp_ms(text);
    });
}

caw_status caw_anchor_second_monday(int year, int month, int hour_local, int utc_offset_minutes,
                                    int64_t* out_utc_ms) {
    return guarded([&] {
        require(out_utc_ms != nullptr, "null argument");
        *out_utc_ms = cawsim::second_monday_ms(year, month) +
                      static_cast<int64_t>(hour_local) * cawsim::kMsPerHour -
                      static_cast<int64_t>(utc_offset_minutes) * cawsim::kMsPerMinute;
    });
}

caw_status caw_run_footprint(const caw_trace* trace, const caw_catalog* catalog,
                             const char* governor, const caw_series* average,
                             const caw_series* marginal, char** out_json) {
    return guarded([&] {
        require(trace && catalog && governor && out_json, "null argument");
        require(average || marginal, "need at least one CI series");
        cawsim::FootprintReport report = cawsim::build_footprint_report(
            trace->impl, catalog->impl, governor, average ? &average->impl : nullptr,
            marginal ? &marginal->impl : nullptr);
        *out_json = dup_string(cawsim::footprint_to_json_text(report));
    });
}

caw_status caw_run_shift(const caw_trace* trace, const caw_catalog* catalog, const char* governor,
                         const caw_series* series, const char* mode, int64_t anchor_utc_ms,
                         int window_hours, const char* options_json, char** out_json) {
    return guarded([&] {
        require(trace && catalog && governor && series && mode && out_json, "null argument");
        json j = parse_options(options_json);
        cawsim::ShiftOptions opts = shift_options_from(j);
        cawsim::FlexibilityWindow flex{anchor_utc_ms, window_hours};
        cawsim::ShiftPlan plan;
        std::string m = mode;
        if (m == "entire")
            plan = cawsim::shift_entire(trace->impl, catalog->impl, governor, series->impl, flex,
                                        opts);
        else if (m == "interrupted")
            plan = cawsim::shift_interrupted(trace->impl, catalog->impl, governor, series->impl,
                                             flex, opts);
        else
            cawsim::fail(cawsim::ErrorCode::invalid_argument, "unknown shift mode '" + m + "'");
        *out_json = dup_string(cawsim::plan_to_json_text(plan));
    });
}

caw_status caw_run_sweep(const caw_trace* trace, const caw_catalog* catalog, const char* governor,
                         const caw_series* series, int year, const int* window_hours,
                         size_t n_windows, const char* options_json, char** out_json) {
    return guarded([&] {
        require(trace && catalog && governor && series && out_json, "null argument");
        require(window_hours != nullptr && n_windows > 0, "no window lengths given");
        json j = parse_options(options_json);
        cawsim::SweepOptions opts;
        opts.shift = shift_options_from(j);
        opts.utc_offset_minutes = j.value("utc_offset_minutes", 0);
        opts.anchor_hour_local = j.value("anchor_hour_local", 9);
        opts.threads = j.value("threads", 0u);
        std::vector<int> windows(window_hours, window_hours + n_windows);
        cawsim::ReductionGrid grid = cawsim::monthly_sweep(trace->impl, catalog->impl, governor,
                                                           series->impl, year, windows, opts);
        *out_json = dup_string(cawsim::grid_to_json_text(grid));
    });
}

caw_status caw_run_scale_nodes(const caw_trace* measurements, const caw_catalog* catalog,
                               const char* governor, const caw_series* const* series,
                               const char* const* labels, size_t n_series,
                               const char* options_json, char** out_json) {
    return guarded([&] {
        require(measurements && catalog && governor && out_json, "null argument");
        json j = parse_options(options_json);
        require(j.contains("candidates") && j["candidates"].is_array(),
                "options need a 'candidates' array");
        std::vector<std::string> candidates;
        for (const auto& c : j["candidates"]) candidates.push_back(c.get<std::string>());

        cawsim::StartPolicy policy;
        if (j.contains("policy")) {
            const json& p = j["policy"];
            policy.year = p.value("year", policy.year);
            policy.utc_offset_minutes = p.value("utc_offset_minutes", 0);
            policy.first_hour_local = p.value("first_hour_local", 9);
            policy.hour_step = p.value("hour_step", 2);
            if (p.contains("hour_overrides"))
                for (const auto& [name, hour] : p["hour_overrides"].items())
                    policy.hour_overrides[name] = hour.get<int>();
            if (p.contains("fixed_start_utc_ms") && !p["fixed_start_utc_ms"].is_null())
                policy.fixed_start_ms = p["fixed_start_utc_ms"].get<int64_t>();
        }
        cawsim::ScenarioResult result =
            cawsim::compare_nodes(measurements->impl, candidates, catalog->impl, governor,
                                  labeled_series(series, labels, n_series), policy);
        *out_json = dup_string(cawsim::scenario_to_json_text(result));
    });
}

caw_status caw_run_scale_governors(const caw_trace* base, const caw_catalog* catalog,
                                   const caw_series* const* series, const char* const* labels,
                                   size_t n_series, const char* options_json,
                                   const caw_trace* const* governor_traces, char** out_json) {
    return guarded([&] {
        require(base && catalog && out_json, "null argument");
        json j = parse_options(options_json);
        require(j.contains("governors") && j["governors"].is_array() && !j["governors"].empty(),
                "options need a non-empty 'governors' array");
        std::vector<cawsim::GovernorVariant> variants;
        size_t idx = 0;
        for (const auto& g : j["governors"]) {
            cawsim::GovernorVariant v;
            v.name = g.at("name").get<std::string>();
            v.runtime_multiplier = g.value("runtime_multiplier", 1.0);
            if (governor_traces && governor_traces[idx]) v.trace = &governor_traces[idx]->impl;
            variants.push_back(v);
            ++idx;
        }
        cawsim::ScenarioResult result = cawsim::compare_governors(
            base->impl, variants, catalog->impl, labeled_series(series, labels, n_series));
        *out_json = dup_string(cawsim::scenario_to_json_text(result));
    });
}

caw_status caw_run_scale_cluster(const caw_trace* const* traces, size_t n_traces,
                                 const caw_catalog* catalog, const char* governor,
                                 const caw_series* const* series, const char* const* labels,
                                 size_t n_series, char** out_json) {
    return guarded([&] {
        require(catalog && governor && out_json, "null argument");
        require(traces != nullptr && n_traces > 0, "no cluster-size traces given");
        std::vector<const cawsim::WorkflowTrace*> ts;
        for (size_t i = 0; i < n_traces; ++i) {
            require(traces[i] != nullptr, "null trace in array");
            ts.push_back(&traces[i]->impl);
        }
        cawsim::ScenarioResult result = cawsim::compare_cluster_sizes(
            ts, catalog->impl, governor, labeled_series(series, labels, n_series));
        *out_json = dup_string(cawsim::scenario_to_json_text(result));
    });
}

caw_status caw_render(const char* result_json, const char* format, char** out_text) {
    return guarded([&] {
        require(result_json && format && out_text, "null argument");
        *out_text = dup_string(cawsim::render_result(result_json, format));
    });
}

caw_status caw_write_file(const char* path, const char* content) {
    return guarded([&] {
        require(path && content, "null argument");
        cawsim::write_text_file(path, content);
    });
}

} // extern "C"
