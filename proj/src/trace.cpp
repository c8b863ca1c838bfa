#include "cawsim/trace.hpp"

#include "cawsim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cawsim {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = (slash == std::string::npos) ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

double parse_percent(const std::string& text) {
    std::string s = trim(text);
    if (!s.empty() && s.back() == '%') s.pop_back();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || trim(std::string(end)) != "")
        fail(ErrorCode::unparseable_value, "unparseable percentage: '" + text + "'");
    return v;
}

struct RawRow {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
};

[[noreturn]] void row_error(std::size_t line_no, const std::string& column, const std::string& what) {
    fail(ErrorCode::unparseable_value,
         "line " + std::to_string(line_no) + ", column '" + column + "': " + what);
}

} // namespace

std::vector<NodeCount> parse_cluster_spec(const std::string& text) {
    std::vector<NodeCount> out;
    for (const std::string& part : split(text, ',')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        NodeCount nc;
        std::size_t sep = p.find_last_of("x:");
        bool has_count = false;
        if (sep != std::string::npos && sep + 1 < p.size()) {
            std::string tail = trim(p.substr(sep + 1));
            if (!tail.empty() &&
                std::all_of(tail.begin(), tail.end(),
                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                // Require whitespace or ':' before 'x' so node ids containing
                // 'x' ("elysium") are not split.
                if (p[sep] == ':' || (sep > 0 && std::isspace(static_cast<unsigned char>(p[sep - 1])))) {
                    nc.node_id = trim(p.substr(0, sep - (p[sep] == ':' ? 0 : 1)));
                    nc.count = std::stoi(tail);
                    has_count = true;
                }
            }
        }
        if (!has_count) {
            nc.node_id = p;
            nc.count = 1;
        }
        if (nc.node_id.empty() || nc.count <= 0)
            fail(ErrorCode::invalid_argument, "bad cluster spec: '" + text + "'");
        out.push_back(nc);
    }
    if (out.empty()) fail(ErrorCode::invalid_argument, "empty cluster spec");
    return out;
}

std::string WorkflowTrace::resources_label() const {
    std::string label;
    for (const NodeCount& nc : node_assignment) {
        if (!label.empty()) label += " + ";
        label += nc.node_id;
        if (nc.count != 1) label += " x" + std::to_string(nc.count);
    }
    return label;
}

double makespan_seconds(const WorkflowTrace& trace) {
    if (trace.tasks.empty()) return 0.0;
    TimestampMs first = trace.tasks.front().start_ms;
    TimestampMs last = first;
    for (const TaskRecord& t : trace.tasks) {
        first = std::min(first, t.start_ms);
        last = std::max(last, t.end_ms());
    }
    return static_cast<double>(last - first) / 1000.0;
}

void finalize_trace(WorkflowTrace& trace, const NodeCatalog& catalog) {
    if (trace.tasks.empty()) fail(ErrorCode::empty_trace, "trace has no tasks");

    std::stable_sort(trace.tasks.begin(), trace.tasks.end(),
                     [](const TaskRecord& a, const TaskRecord& b) {
                         if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
                         return a.task_id < b.task_id;
                     });

    for (TaskRecord& t : trace.tasks) {
        if (t.duration_s < 0.0)
            fail(ErrorCode::unparseable_value, "task '" + t.task_id + "': negative duration");
        // Canonical millisecond precision, matching the timestamp fields.
        t.duration_s = static_cast<double>(std::llround(t.duration_s * 1000.0)) / 1000.0;
        if (t.cpus_allocated <= 0)
            fail(ErrorCode::unparseable_value, "task '" + t.task_id + "': cpus must be positive");
        if (t.submit_ms > t.start_ms) {
            trace.warnings.push_back("task '" + t.task_id +
                                     "': submit after start, clamped to start");
            t.submit_ms = t.start_ms;
        }
        double max_pct = 100.0 * t.cpus_allocated;
        if (t.cpu_utilization_pct < 0.0) {
            trace.warnings.push_back("task '" + t.task_id + "': negative %cpu clamped to 0");
            t.cpu_utilization_pct = 0.0;
        } else if (t.cpu_utilization_pct > max_pct) {
            trace.warnings.push_back("task '" + t.task_id + "': %cpu " +
                                     std::to_string(t.cpu_utilization_pct) + " exceeds " +
                                     std::to_string(max_pct) + ", clamped");
            t.cpu_utilization_pct = max_pct;
        }
        if (t.memory_allocated_b < 0)
            fail(ErrorCode::unparseable_value, "task '" + t.task_id + "': negative memory");
        catalog.at(t.node_id); // throws unknown_node
    }

    if (trace.node_assignment.empty()) {
        std::set<std::string> distinct;
        for (const TaskRecord& t : trace.tasks) distinct.insert(t.node_id);
        for (const std::string& id : distinct) trace.node_assignment.push_back({id, 1});
        trace.warnings.push_back(
            "no cluster given; assuming one node per distinct node_id (" +
            std::to_string(distinct.size()) + ")");
    }
    std::set<std::string> assigned;
    for (const NodeCount& nc : trace.node_assignment) {
        catalog.at(nc.node_id);
        if (nc.count <= 0) fail(ErrorCode::invalid_argument, "node_assignment count must be > 0");
        if (!assigned.insert(nc.node_id).second)
            fail(ErrorCode::invalid_argument,
                 "node '" + nc.node_id + "' listed twice in node_assignment");
    }
    for (const TaskRecord& t : trace.tasks)
        if (!assigned.count(t.node_id))
            fail(ErrorCode::unknown_node,
                 "task '" + t.task_id + "' runs on '" + t.node_id +
                     "' which is not part of the node assignment");

    trace.origin_start_ms = trace.tasks.front().start_ms;
    if (makespan_seconds(trace) <= 0.0)
        fail(ErrorCode::empty_trace, "trace makespan is zero");
}

WorkflowTrace parse_trace_text(const std::string& text, const NodeCatalog& catalog,
                               const TraceOptions& options, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::map<std::string, std::string> meta;
    std::vector<std::string> header;
    std::vector<RawRow> rows;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            std::size_t colon = body.find(':');
            if (colon != std::string::npos)
                meta[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
            continue;
        }
        if (header.empty()) {
            for (std::string& h : split(line, '\t')) header.push_back(trim(h));
            continue;
        }
        rows.push_back({split(line, '\t'), line_no});
    }

    if (header.empty() || rows.empty())
        fail(ErrorCode::empty_trace, "trace '" + origin + "' contains no task rows");

    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    auto require_col = [&](const std::string& name) -> int {
        int i = col(name);
        if (i < 0) fail(ErrorCode::missing_column, "trace is missing column '" + name + "'");
        return i;
    };

    int c_task = require_col("task_id");
    int c_process = require_col("process");
    int c_start = require_col("start");
    int c_realtime = col("realtime");
    int c_complete = col("complete");
    if (c_realtime < 0 && c_complete < 0)
        fail(ErrorCode::missing_column, "trace is missing column 'realtime' (or 'complete')");
    int c_pcpu = require_col("%cpu");
    int c_cpus = require_col("cpus");
    int c_memory = require_col("memory");
    int c_submit = col("submit");
    int c_node = col("node");
    if (c_node < 0 && !options.default_node)
        fail(ErrorCode::missing_column,
             "trace is missing column 'node' and no default node was given");

    WorkflowTrace trace;
    auto field = [&](const RawRow& r, int idx, const char* name) -> std::string {
        if (idx < 0 || static_cast<std::size_t>(idx) >= r.fields.size())
            row_error(r.line_no, name, "missing field");
        return trim(r.fields[static_cast<std::size_t>(idx)]);
    };

    for (const RawRow& r : rows) {
        TaskRecord t;
        t.task_id = field(r, c_task, "task_id");
        t.process = field(r, c_process, "process");
        if (t.task_id.empty()) row_error(r.line_no, "task_id", "empty value");
        try {
            t.start_ms = parse_timestamp_ms(field(r, c_start, "start"));
        } catch (const Error& e) {
            row_error(r.line_no, "start", e.what());
        }
        if (c_submit >= 0) {
            std::string s = field(r, c_submit, "submit");
            if (s.empty() || s == "-") {
                t.submit_ms = t.start_ms;
            } else {
                try {
                    t.submit_ms = parse_timestamp_ms(s);
                } catch (const Error& e) {
                    row_error(r.line_no, "submit", e.what());
                }
            }
        } else {
            t.submit_ms = t.start_ms;
        }

        if (c_realtime >= 0) {
            try {
                t.duration_s = parse_duration_seconds(field(r, c_realtime, "realtime"));
            } catch (const Error& e) {
                row_error(r.line_no, "realtime", e.what());
            }
        } else {
            TimestampMs complete = 0;
            try {
                complete = parse_timestamp_ms(field(r, c_complete, "complete"));
            } catch (const Error& e) {
                row_error(r.line_no, "complete", e.what());
            }
            if (complete < t.start_ms) row_error(r.line_no, "complete", "before start");
            t.duration_s = static_cast<double>(complete - t.start_ms) / 1000.0;
        }

        std::string pcpu = field(r, c_pcpu, "%cpu");
        if (pcpu == "-" || pcpu.empty()) {
            trace.warnings.push_back("line " + std::to_string(r.line_no) +
                                     ": missing %cpu treated as 0");
            t.cpu_utilization_pct = 0.0;
        } else {
            try {
                t.cpu_utilization_pct = parse_percent(pcpu);
            } catch (const Error& e) {
                row_error(r.line_no, "%cpu", e.what());
            }
        }

        std::string cpus = field(r, c_cpus, "cpus");
        char* end = nullptr;
        long cv = std::strtol(cpus.c_str(), &end, 10);
        if (end == cpus.c_str() || trim(std::string(end)) != "" || cv <= 0)
            row_error(r.line_no, "cpus", "expected positive integer, got '" + cpus + "'");
        t.cpus_allocated = static_cast<int>(cv);

        std::string mem = field(r, c_memory, "memory");
        if (mem == "-" || mem.empty()) {
            trace.warnings.push_back("line " + std::to_string(r.line_no) +
                                     ": missing memory treated as 0");
            t.memory_allocated_b = 0;
        } else {
            try {
                t.memory_allocated_b = parse_memory_bytes(mem);
            } catch (const Error& e) {
                row_error(r.line_no, "memory", e.what());
            }
        }

        if (c_node >= 0) {
            t.node_id = field(r, c_node, "node");
            if (t.node_id.empty() || t.node_id == "-") {
                if (!options.default_node)
                    row_error(r.line_no, "node", "empty value and no default node given");
                t.node_id = *options.default_node;
            }
        } else {
            t.node_id = *options.default_node;
        }
        trace.tasks.push_back(std::move(t));
    }

    if (options.workflow_name) trace.workflow_name = *options.workflow_name;
    else if (meta.count("workflow")) trace.workflow_name = meta["workflow"];
    else trace.workflow_name = file_stem(origin);

    if (options.region) trace.origin_region = *options.region;
    else if (meta.count("region")) trace.origin_region = meta["region"];

    if (options.cluster) trace.node_assignment = parse_cluster_spec(*options.cluster);
    else if (meta.count("cluster")) trace.node_assignment = parse_cluster_spec(meta["cluster"]);

    finalize_trace(trace, catalog);
    return trace;
}

WorkflowTrace parse_trace(const std::string& path, const NodeCatalog& catalog,
                          const TraceOptions& options) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io_error, "cannot open trace file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        WorkflowTrace trace = trace_from_json_text(text, catalog);
        if (options.workflow_name) trace.workflow_name = *options.workflow_name;
        if (options.region) trace.origin_region = *options.region;
        if (options.cluster) {
            trace.node_assignment = parse_cluster_spec(*options.cluster);
            finalize_trace(trace, catalog);
        }
        return trace;
    }
    return parse_trace_text(text, catalog, options, path);
}

std::string trace_to_json_text(const WorkflowTrace& trace) {
    json tasks = json::array();
    for (const TaskRecord& t : trace.tasks)
        tasks.push_back({{"task_id", t.task_id},
                         {"process", t.process},
                         {"submit_utc_ms", t.submit_ms},
                         {"start_utc_ms", t.start_ms},
                         {"duration_s", t.duration_s},
                         {"cpu_utilization_pct", t.cpu_utilization_pct},
                         {"cpus_allocated", t.cpus_allocated},
                         {"memory_allocated_b", t.memory_allocated_b},
                         {"node_id", t.node_id}});
    json assignment = json::array();
    for (const NodeCount& nc : trace.node_assignment)
        assignment.push_back({{"node_id", nc.node_id}, {"count", nc.count}});
    json j{{"workflow_name", trace.workflow_name},
           {"origin_region", trace.origin_region},
           {"origin_start_utc_ms", trace.origin_start_ms},
           {"node_assignment", assignment},
           {"tasks", tasks}};
    return j.dump(2) + "\n";
}

WorkflowTrace trace_from_json_text(const std::string& json_text, const NodeCatalog& catalog) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("trace JSON parse error: ") + e.what());
    }
    WorkflowTrace trace;
    try {
        trace.workflow_name = j.value("workflow_name", std::string{});
        trace.origin_region = j.value("origin_region", std::string{});
        if (j.contains("node_assignment"))
            for (const auto& a : j.at("node_assignment"))
                trace.node_assignment.push_back(
                    {a.at("node_id").get<std::string>(), a.at("count").get<int>()});
        if (!j.contains("tasks") || !j.at("tasks").is_array())
            fail(ErrorCode::bad_format, "trace JSON needs a 'tasks' array");
        for (const auto& tj : j.at("tasks")) {
            TaskRecord t;
            t.task_id = tj.at("task_id").get<std::string>();
            t.process = tj.value("process", std::string{});
            t.start_ms = tj.at("start_utc_ms").get<std::int64_t>();
            t.submit_ms = tj.value("submit_utc_ms", t.start_ms);
            t.duration_s = tj.at("duration_s").get<double>();
            t.cpu_utilization_pct = tj.value("cpu_utilization_pct", 0.0);
            t.cpus_allocated = tj.value("cpus_allocated", 1);
            t.memory_allocated_b = tj.value("memory_allocated_b", std::int64_t{0});
            t.node_id = tj.at("node_id").get<std::string>();
            trace.tasks.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::bad_format, std::string("trace JSON field error: ") + e.what());
    }
    finalize_trace(trace, catalog);
    return trace;
}

} // namespace cawsim
