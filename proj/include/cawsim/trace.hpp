#pragma once

#include "cawsim/catalog.hpp"
#include "cawsim/time_util.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cawsim {

struct TaskRecord {
    std::string task_id;
    std::string process;
    TimestampMs submit_ms = 0;
    TimestampMs start_ms = 0;
    double duration_s = 0.0;            // wall-clock "realtime"
    double cpu_utilization_pct = 0.0;   // percent of one core; 250 = 2.5 cores busy
    int cpus_allocated = 1;
    std::int64_t memory_allocated_b = 0;
    std::string node_id;

    TimestampMs end_ms() const {
        return start_ms + static_cast<TimestampMs>(std::int64_t(duration_s * 1000.0 + 0.5));
    }
    double memory_allocated_gb() const {
        return static_cast<double>(memory_allocated_b) / 1073741824.0;
    }

    bool operator==(const TaskRecord&) const = default;
};

struct NodeCount {
    std::string node_id;
    int count = 1;

    bool operator==(const NodeCount&) const = default;
};

struct WorkflowTrace {
    std::string workflow_name;
    std::vector<TaskRecord> tasks;       // sorted by (start, task_id)
    std::vector<NodeCount> node_assignment;
    std::string origin_region;
    TimestampMs origin_start_ms = 0;
    std::vector<std::string> warnings;   // parse-time diagnostics, not serialized

    // Human-readable cluster description, e.g. "atlantis x8".
    std::string resources_label() const;
};

struct TraceOptions {
    std::optional<std::string> workflow_name;
    std::optional<std::string> cluster;      // "atlantis x8, camelot x2"
    std::optional<std::string> region;
    std::optional<std::string> default_node; // used when the node column is absent
};

// Reads a tab-separated Nextflow-style trace. Rows are validated against the
// catalog, normalized to canonical units and sorted by (start, task_id).
WorkflowTrace parse_trace(const std::string& path, const NodeCatalog& catalog,
                          const TraceOptions& options = {});

WorkflowTrace parse_trace_text(const std::string& text, const NodeCatalog& catalog,
                               const TraceOptions& options = {}, const std::string& origin = "<memory>");

std::vector<NodeCount> parse_cluster_spec(const std::string& text);

// Canonical JSON serialization (stable schema, see README).
std::string trace_to_json_text(const WorkflowTrace& trace);
WorkflowTrace trace_from_json_text(const std::string& json_text, const NodeCatalog& catalog);

double makespan_seconds(const WorkflowTrace& trace);

// Re-derives node_assignment / origin fields and checks invariants on a trace
// built in memory (tests, scaling variants).
void finalize_trace(WorkflowTrace& trace, const NodeCatalog& catalog);

} // namespace cawsim
