#include "cawsim/ci.hpp"

#include "cawsim/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cawsim {

const char* signal_kind_name(SignalKind kind) {
    return kind == SignalKind::average ? "average" : "marginal";
}

SignalKind parse_signal_kind(const std::string& text) {
    if (text == "average" || text == "avg") return SignalKind::average;
    if (text == "marginal" || text == "marg") return SignalKind::marginal;
    fail(ErrorCode::invalid_argument, "unknown signal kind '" + text + "'");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Index of the sample whose interval contains t, or -1.
std::ptrdiff_t sample_index_at(const CiSeries& series, TimestampMs t) {
    const auto& v = series.samples;
    auto it = std::upper_bound(v.begin(), v.end(), t, [](TimestampMs value, const CiSample& s) {
        return value < s.start_ms;
    });
    if (it == v.begin()) return -1;
    --it;
    if (t >= it->start_ms + series.resolution_s * kMsPerSecond) return -1; // inside a gap
    return it - v.begin();
}

} // namespace

CiSeries load_ci_text(const std::string& text, const std::string& region, SignalKind kind,
                      const CiLoadOptions& options, const std::string& origin) {
    CiSeries series;
    series.region = region;
    series.kind = kind;

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            fail(ErrorCode::bad_format,
                 origin + ":" + std::to_string(line_no) + ": expected 'timestamp,value'");
        std::string ts = trim(line.substr(0, comma));
        std::string val = trim(line.substr(comma + 1));
        if (!header_seen) {
            header_seen = true;
            if (ts == "timestamp_utc") continue; // header row
        }
        CiSample s;
        try {
            s.start_ms = parse_timestamp_ms(ts);
        } catch (const Error& e) {
            fail(ErrorCode::bad_format, origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        char* end = nullptr;
        s.ci_g_per_kwh = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || trim(std::string(end)) != "")
            fail(ErrorCode::bad_format,
                 origin + ":" + std::to_string(line_no) + ": unparseable intensity '" + val + "'");
        if (s.ci_g_per_kwh < 0.0)
            fail(ErrorCode::negative_intensity, origin + ":" + std::to_string(line_no) +
                                                    ": negative carbon intensity " + val);
        series.samples.push_back(s);
    }
    if (series.samples.empty()) fail(ErrorCode::bad_format, "CI file '" + origin + "' has no samples");

    if (!std::is_sorted(series.samples.begin(), series.samples.end(),
                        [](const CiSample& a, const CiSample& b) { return a.start_ms < b.start_ms; })) {
        std::sort(series.samples.begin(), series.samples.end(),
                  [](const CiSample& a, const CiSample& b) { return a.start_ms < b.start_ms; });
        series.warnings.push_back("input was not sorted by timestamp; sorted");
    }

    // Infer the resolution from the smallest spacing; all spacings must be
    // multiples of it (larger multiples are gaps).
    std::int64_t resolution_ms = 0;
    for (std::size_t i = 1; i < series.samples.size(); ++i) {
        std::int64_t d = series.samples[i].start_ms - series.samples[i - 1].start_ms;
        if (d == 0)
            fail(ErrorCode::bad_format, "duplicate timestamp " +
                                            format_timestamp_ms(series.samples[i].start_ms) +
                                            " in '" + origin + "'");
        if (resolution_ms == 0 || d < resolution_ms) resolution_ms = d;
    }
    if (resolution_ms == 0)
        resolution_ms = (kind == SignalKind::marginal ? 300 : 3600) * kMsPerSecond;
    series.resolution_s = resolution_ms / kMsPerSecond;
    if (resolution_ms % kMsPerSecond != 0)
        fail(ErrorCode::bad_format, "sub-second CI resolution in '" + origin + "'");

    std::vector<CiSample> filled;
    filled.reserve(series.samples.size());
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        if (i > 0) {
            std::int64_t d = series.samples[i].start_ms - series.samples[i - 1].start_ms;
            if (d % resolution_ms != 0)
                fail(ErrorCode::bad_format,
                     "irregular sample spacing at " +
                         format_timestamp_ms(series.samples[i].start_ms) + " in '" + origin + "'");
            for (std::int64_t t = series.samples[i - 1].start_ms + resolution_ms;
                 t < series.samples[i].start_ms; t += resolution_ms) {
                series.gaps.push_back(t);
                if (options.fill_gaps)
                    filled.push_back({t, series.samples[i - 1].ci_g_per_kwh});
            }
        }
        filled.push_back(series.samples[i]);
    }
    if (!series.gaps.empty()) {
        if (options.fill_gaps) {
            series.samples = std::move(filled);
            series.warnings.push_back(std::to_string(series.gaps.size()) +
                                      " missing interval(s) forward-filled");
            series.gaps.clear();
        } else {
            series.warnings.push_back(std::to_string(series.gaps.size()) +
                                      " missing interval(s), first at " +
                                      format_timestamp_ms(series.gaps.front()));
        }
    }
    return series;
}

CiSeries load_ci(const std::string& path, const std::string& region, SignalKind kind,
                 const CiLoadOptions& options) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io_error, "cannot open CI file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_ci_text(buf.str(), region, kind, options, path);
}

double ci_at(const CiSeries& series, TimestampMs t) {
    if (t < series.span_begin_ms() || t >= series.span_end_ms())
        fail(ErrorCode::out_of_range, "timestamp " + format_timestamp_ms(t) +
                                          " outside CI span [" +
                                          format_timestamp_ms(series.span_begin_ms()) + ", " +
                                          format_timestamp_ms(series.span_end_ms()) + ")");
    std::ptrdiff_t idx = sample_index_at(series, t);
    if (idx < 0)
        fail(ErrorCode::gap_detected,
             "CI series has no sample covering " + format_timestamp_ms(t));
    return series.samples[static_cast<std::size_t>(idx)].ci_g_per_kwh;
}

double integrate_emissions(const CiSeries& series, TimestampMs start_ms, TimestampMs end_ms,
                           double power_kw) {
    if (end_ms < start_ms)
        fail(ErrorCode::invalid_argument, "integration interval end precedes start");
    if (power_kw < 0.0) fail(ErrorCode::invalid_argument, "negative power");
    if (start_ms == end_ms) return 0.0;
    if (start_ms < series.span_begin_ms() || end_ms > series.span_end_ms())
        fail(ErrorCode::out_of_range,
             "interval [" + format_timestamp_ms(start_ms) + ", " + format_timestamp_ms(end_ms) +
                 ") outside CI span [" + format_timestamp_ms(series.span_begin_ms()) + ", " +
                 format_timestamp_ms(series.span_end_ms()) + ")");

    const std::int64_t res_ms = series.resolution_s * kMsPerSecond;
    std::ptrdiff_t idx = sample_index_at(series, start_ms);
    if (idx < 0)
        fail(ErrorCode::gap_detected,
             "CI series has no sample covering " + format_timestamp_ms(start_ms));

    double grams = 0.0;
    TimestampMs cursor = start_ms;
    for (std::size_t i = static_cast<std::size_t>(idx);
         i < series.samples.size() && cursor < end_ms; ++i) {
        const CiSample& s = series.samples[i];
        if (s.start_ms > cursor)
            fail(ErrorCode::gap_detected,
                 "CI series has a gap at " + format_timestamp_ms(cursor) +
                     " inside the integration interval");
        TimestampMs interval_end = s.start_ms + res_ms;
        TimestampMs overlap_end = std::min(interval_end, end_ms);
        if (overlap_end > cursor) {
            double hours = static_cast<double>(overlap_end - cursor) / kMsPerHourD;
            grams += power_kw * hours * s.ci_g_per_kwh;
        }
        cursor = interval_end;
    }
    if (cursor < end_ms)
        fail(ErrorCode::gap_detected,
             "CI series has a gap at " + format_timestamp_ms(cursor) +
                 " inside the integration interval");
    return grams;
}

CiWindow ci_window(const CiSeries& series, TimestampMs start_ms, TimestampMs end_ms) {
    if (end_ms <= start_ms) fail(ErrorCode::invalid_argument, "CI window end must follow start");
    double hours = static_cast<double>(end_ms - start_ms) / kMsPerHourD;
    double mean = integrate_emissions(series, start_ms, end_ms, 1.0) / hours;
    return {start_ms, end_ms, mean};
}

std::vector<CiWindow> hourly_ci_windows(const CiSeries& series, TimestampMs anchor_ms,
                                        std::size_t count) {
    std::vector<CiWindow> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        TimestampMs s = anchor_ms + static_cast<TimestampMs>(i) * kMsPerHour;
        out.push_back(ci_window(series, s, s + kMsPerHour));
    }
    return out;
}

CiSeries resample_hourly(const CiSeries& series) {
    if (series.resolution_s == 3600 && series.gaps.empty()) return series;
    CiSeries out;
    out.region = series.region;
    out.kind = series.kind;
    out.resolution_s = 3600;

    TimestampMs begin = series.span_begin_ms();
    TimestampMs first_hour = floor_to_hour_ms(begin);
    if (first_hour < begin) first_hour += kMsPerHour; // only full hours
    const std::int64_t res_ms = series.resolution_s * kMsPerSecond;
    for (TimestampMs h = first_hour; h + kMsPerHour <= series.span_end_ms(); h += kMsPerHour) {
        bool gap_inside =
            std::any_of(series.gaps.begin(), series.gaps.end(), [&](TimestampMs g) {
                return g + res_ms > h && g < h + kMsPerHour;
            });
        if (gap_inside) {
            out.gaps.push_back(h);
            continue;
        }
        out.samples.push_back({h, ci_window(series, h, h + kMsPerHour).mean_ci});
    }
    if (out.samples.empty())
        fail(ErrorCode::bad_format, "series too short to resample to hourly means");
    if (!out.gaps.empty())
        out.warnings.push_back(std::to_string(out.gaps.size()) +
                               " hourly mean(s) skipped due to gaps");
    return out;
}

} // namespace cawsim
