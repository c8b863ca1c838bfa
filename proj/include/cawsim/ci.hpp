#pragma once

#include "cawsim/time_util.hpp"

#include <string>
#include <vector>

namespace cawsim {

enum class SignalKind { average, marginal };

const char* signal_kind_name(SignalKind kind);
SignalKind parse_signal_kind(const std::string& text);

struct CiSample {
    TimestampMs start_ms = 0; // interval start
    double ci_g_per_kwh = 0.0;
};

// Step-function carbon-intensity series: each sample covers
// [start, start + resolution). Samples are sorted; a jump larger than the
// resolution is a gap (allowed but flagged, and rejected by integration
// unless forward-filled at load time).
struct CiSeries {
    std::string region;
    SignalKind kind = SignalKind::average;
    std::int64_t resolution_s = 3600;
    std::vector<CiSample> samples;
    std::vector<TimestampMs> gaps; // starts of missing intervals
    std::vector<std::string> warnings;

    TimestampMs span_begin_ms() const { return samples.front().start_ms; }
    TimestampMs span_end_ms() const {
        return samples.back().start_ms + resolution_s * kMsPerSecond;
    }
};

struct CiLoadOptions {
    bool fill_gaps = false; // forward-fill missing intervals, with a warning
};

// CSV with header "timestamp_utc,ci_g_per_kwh". Resolution is inferred from
// the sample spacing (falls back to 3600 s / 300 s by kind for single rows).
CiSeries load_ci(const std::string& path, const std::string& region, SignalKind kind,
                 const CiLoadOptions& options = {});
CiSeries load_ci_text(const std::string& text, const std::string& region, SignalKind kind,
                      const CiLoadOptions& options = {}, const std::string& origin = "<memory>");

// Value of the interval containing t (step semantics, no interpolation).
double ci_at(const CiSeries& series, TimestampMs t);

// Integral of power against the step series over [start, end], in grams:
// sum over overlapped intervals of power_kw * overlap_hours * ci.
double integrate_emissions(const CiSeries& series, TimestampMs start_ms, TimestampMs end_ms,
                           double power_kw);

struct CiWindow {
    TimestampMs start_ms = 0;
    TimestampMs end_ms = 0;
    double mean_ci = 0.0; // duration-weighted mean of overlapped samples
};

CiWindow ci_window(const CiSeries& series, TimestampMs start_ms, TimestampMs end_ms);

// Hourly means starting at `anchor`, one window per hour, `count` windows.
std::vector<CiWindow> hourly_ci_windows(const CiSeries& series, TimestampMs anchor_ms,
                                        std::size_t count);

// Hourly-mean series covering the full hours of the input span. Used to put
// sub-hourly (marginal) data on the hourly granularity the shifting modes use.
CiSeries resample_hourly(const CiSeries& series);

} // namespace cawsim
