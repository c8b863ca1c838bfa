#include "cawsim/time_util.hpp"

#include "cawsim/error.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cawsim {

namespace {

bool is_all_digits(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

[[noreturn]] void bad_timestamp(const std::string& text) {
    fail(ErrorCode::unparseable_value, "unparseable timestamp: '" + text + "'");
}

} // namespace

TimestampMs parse_timestamp_ms(const std::string& text) {
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) bad_timestamp(text);

    if (is_all_digits(s)) return std::stoll(s);

    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double sec = 0.0;
    int pos = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%n", &year, &month, &day, &pos) != 3) bad_timestamp(text);
    std::string rest = s.substr(static_cast<std::size_t>(pos));
    if (!rest.empty()) {
        char sep = rest[0];
        if (sep != 'T' && sep != ' ') bad_timestamp(text);
        rest.erase(rest.begin());
        if (std::sscanf(rest.c_str(), "%d:%d:%lf%n", &hour, &minute, &sec, &pos) != 3)
            bad_timestamp(text);
        rest = rest.substr(static_cast<std::size_t>(pos));
    }

    std::int64_t offset_ms = 0;
    if (!rest.empty()) {
        if (rest == "Z") {
            // UTC marker.
        } else if (rest[0] == '+' || rest[0] == '-') {
            int oh = 0, om = 0;
            if (std::sscanf(rest.c_str() + 1, "%d:%d", &oh, &om) != 2) bad_timestamp(text);
            offset_ms = (static_cast<std::int64_t>(oh) * 60 + om) * kMsPerMinute;
            if (rest[0] == '-') offset_ms = -offset_ms;
        } else {
            bad_timestamp(text);
        }
    }

    using namespace std::chrono;
    if (month < 1 || month > 12 || day < 1 || day > 31) bad_timestamp(text);
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) bad_timestamp(text);
    sys_days days{ymd};
    std::int64_t ms = duration_cast<milliseconds>(days.time_since_epoch()).count();
    ms += (static_cast<std::int64_t>(hour) * 60 + minute) * kMsPerMinute;
    ms += static_cast<std::int64_t>(std::llround(sec * 1000.0));
    return ms - offset_ms;
}

std::string format_timestamp_ms(TimestampMs t) {
    using namespace std::chrono;
    std::int64_t ms_part = t % 1000;
    std::int64_t secs = t / 1000;
    if (ms_part < 0) {
        ms_part += 1000;
        secs -= 1;
    }
    sys_seconds tp{seconds{secs}};
    sys_days d = floor<days>(tp);
    year_month_day ymd{d};
    hh_mm_ss<seconds> hms{tp - d};
    char buf[40];
    if (ms_part != 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ld.%03lldZ",
                      static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                      static_cast<long>(hms.minutes().count()),
                      static_cast<long>(hms.seconds().count()),
                      static_cast<long long>(ms_part));
    } else {
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                      static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                      static_cast<long>(hms.minutes().count()),
                      static_cast<long>(hms.seconds().count()));
    }
    return buf;
}

double parse_duration_seconds(const std::string& text) {
    std::string s = text;
    std::size_t i = 0;
    double total = 0.0;
    bool any = false;
    bool bare_number = true;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        char* end = nullptr;
        double v = std::strtod(s.c_str() + i, &end);
        if (end == s.c_str() + i)
            fail(ErrorCode::unparseable_value, "unparseable duration: '" + text + "'");
        i = static_cast<std::size_t>(end - s.c_str());
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::string unit;
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i])))
            unit.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i++]))));
        if (unit == "d") total += v * 86400.0;
        else if (unit == "h") total += v * 3600.0;
        else if (unit == "m" || unit == "min") total += v * 60.0;
        else if (unit == "s" || unit == "sec") total += v;
        else if (unit == "ms") total += v / 1000.0;
        else if (unit.empty()) total += v / 1000.0; // raw traces store milliseconds
        else fail(ErrorCode::unparseable_value, "unknown duration unit '" + unit + "' in '" + text + "'");
        if (!unit.empty()) bare_number = false;
        any = true;
    }
    (void)bare_number;
    if (!any) fail(ErrorCode::unparseable_value, "empty duration");
    if (total < 0.0) fail(ErrorCode::unparseable_value, "negative duration: '" + text + "'");
    return total;
}

std::int64_t parse_memory_bytes(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    char* end = nullptr;
    double v = std::strtod(text.c_str() + i, &end);
    if (end == text.c_str() + i)
        fail(ErrorCode::unparseable_value, "unparseable memory size: '" + text + "'");
    i = static_cast<std::size_t>(end - text.c_str());
    while (i < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '.'))
        ++i;
    std::string unit;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
        unit.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i++]))));
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size())
        fail(ErrorCode::unparseable_value, "unparseable memory size: '" + text + "'");

    double mult = 1.0;
    if (unit.empty() || unit == "B") mult = 1.0;
    else if (unit == "KB" || unit == "KIB") mult = 1024.0;
    else if (unit == "MB" || unit == "MIB") mult = 1048576.0;
    else if (unit == "GB" || unit == "GIB") mult = 1073741824.0;
    else if (unit == "TB" || unit == "TIB") mult = 1099511627776.0;
    else if (unit == "PB" || unit == "PIB") mult = 1125899906842624.0;
    else fail(ErrorCode::unparseable_value, "unknown memory unit '" + unit + "' in '" + text + "'");

    double bytes = v * mult;
    if (bytes < 0.0)
        fail(ErrorCode::unparseable_value, "negative memory size: '" + text + "'");
    return static_cast<std::int64_t>(std::llround(bytes));
}

TimestampMs utc_midnight_ms(int year, int month, int day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) fail(ErrorCode::invalid_argument, "invalid calendar date");
    return duration_cast<milliseconds>(sys_days{ymd}.time_since_epoch()).count();
}

TimestampMs second_monday_ms(int year, int month) {
    using namespace std::chrono;
    year_month_weekday ymw{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           weekday_indexed{Monday, 2}};
    if (!ymw.ok()) fail(ErrorCode::invalid_argument, "invalid year/month");
    return duration_cast<milliseconds>(sys_days{ymw}.time_since_epoch()).count();
}

TimestampMs median_day_ms(int year, int month) {
    using namespace std::chrono;
    year_month_day_last last{std::chrono::year{year},
                             month_day_last{std::chrono::month{static_cast<unsigned>(month)}}};
    if (!last.ok()) fail(ErrorCode::invalid_argument, "invalid year/month");
    unsigned days_in_month = static_cast<unsigned>(last.day());
    unsigned mid = (days_in_month + 1) / 2;
    return utc_midnight_ms(year, month, static_cast<int>(mid));
}

} // namespace cawsim
