#pragma once

#include <cstdint>
#include <string>

namespace cawsim {

// All timestamps are milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

inline constexpr std::int64_t kMsPerSecond = 1000;
inline constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
inline constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
inline constexpr double kMsPerHourD = 3.6e6;

// Accepts "2024-03-11T09:00:00Z", "2024-03-11 09:00:00.123", an optional
// "+HH:MM"/"-HH:MM" offset, or a bare integer (epoch milliseconds).
TimestampMs parse_timestamp_ms(const std::string& text);

// ISO-8601 with milliseconds only when nonzero: "2024-03-11T09:00:00Z".
std::string format_timestamp_ms(TimestampMs t);

// Nextflow-style durations: "1h 2m 3s", "1m 30s", "2.5s", "500ms", "1d".
// A bare number is taken as milliseconds (raw trace convention).
double parse_duration_seconds(const std::string& text);

// Memory sizes with binary multiples: "4 GB" -> 4 * 2^30. Units B..PB,
// case-insensitive, "4GB"/"4.GB"/"4 GB" all accepted. Bare number = bytes.
std::int64_t parse_memory_bytes(const std::string& text);

inline TimestampMs floor_to_hour_ms(TimestampMs t) {
    TimestampMs r = t % kMsPerHour;
    if (r < 0) r += kMsPerHour;
    return t - r;
}

// 00:00 UTC of the second Monday of the given month.
TimestampMs second_monday_ms(int year, int month);

// 00:00 UTC of the middle day of the month: floor((days_in_month + 1) / 2).
TimestampMs median_day_ms(int year, int month);

TimestampMs utc_midnight_ms(int year, int month, int day);

} // namespace cawsim
