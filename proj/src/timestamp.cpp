#include "dhf/timestamp.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

#include "dhf/errors.hpp"

namespace dhf {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilTime civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    CivilTime c;
    c.year = static_cast<int>(y + (m <= 2));
    c.month = static_cast<int>(m);
    c.day = static_cast<int>(d);
    c.hour = 0;
    return c;
}

Timestamp make_timestamp(int year, int month, int day, int hour) {
    return Timestamp{days_from_civil(year, month, day) * 24 + hour};
}

static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

static std::int64_t positive_mod(std::int64_t a, std::int64_t b) {
    std::int64_t r = a % b;
    return r < 0 ? r + b : r;
}

CivilTime civil_of(Timestamp ts, int utc_offset_minutes) {
    // offsets are whole hours in this project's configs, but allow minutes;
    // the hour field reports the local wall-clock hour.
    const std::int64_t local_minutes = ts.hours * 60 + utc_offset_minutes;
    const std::int64_t local_hours = floor_div(local_minutes, 60);
    const std::int64_t days = floor_div(local_hours, 24);
    CivilTime c = civil_from_days(days);
    c.hour = static_cast<int>(positive_mod(local_hours, 24));
    return c;
}

int hour_of_day(Timestamp ts, int utc_offset_minutes) {
    return civil_of(ts, utc_offset_minutes).hour;
}

int day_of_week_monday0(Timestamp ts, int utc_offset_minutes) {
    const std::int64_t local_minutes = ts.hours * 60 + utc_offset_minutes;
    const std::int64_t days = floor_div(local_minutes, 60 * 24);
    // 1970-01-01 was a Thursday.
    return static_cast<int>(positive_mod(days + 3, 7));
}

int day_of_year(Timestamp ts, int utc_offset_minutes) {
    const CivilTime c = civil_of(ts, utc_offset_minutes);
    return static_cast<int>(days_from_civil(c.year, c.month, c.day) -
                            days_from_civil(c.year, 1, 1)) +
           1;
}

Timestamp day_start(Timestamp ts, int utc_offset_minutes) {
    const std::int64_t local_minutes = ts.hours * 60 + utc_offset_minutes;
    const std::int64_t day = floor_div(local_minutes, 60 * 24);
    return Timestamp{floor_div(day * 24 * 60 - utc_offset_minutes, 60)};
}

std::string to_iso(Timestamp ts) {
    const CivilTime c = civil_of(ts, 0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00:00+00:00", c.year,
                  c.month, c.day, c.hour);
    return buf;
}

std::string to_iso_date(Timestamp ts, int utc_offset_minutes) {
    const CivilTime c = civil_of(ts, utc_offset_minutes);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

namespace {

bool read_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char ch = s[pos + i];
        if (ch < '0' || ch > '9') return false;
        v = v * 10 + (ch - '0');
    }
    out = v;
    return true;
}

} // namespace

std::int64_t parse_iso_minutes(const std::string& text) {
    // YYYY-MM-DD[T ]HH:MM[:SS][Z|+HH:MM|+HHMM]
    const auto fail = [&]() -> std::int64_t {
        throw ParseError("invalid ISO-8601 timestamp: '" + text + "'");
    };
    int year, month, day, hour, minute;
    if (!read_int(text, 0, 4, year)) return fail();
    if (text.size() < 16 || text[4] != '-' || text[7] != '-') return fail();
    if (!read_int(text, 5, 2, month) || !read_int(text, 8, 2, day)) return fail();
    if (text[10] != 'T' && text[10] != ' ') return fail();
    if (!read_int(text, 11, 2, hour) || text[13] != ':' ||
        !read_int(text, 14, 2, minute))
        return fail();
    std::size_t pos = 16;
    if (pos < text.size() && text[pos] == ':') {
        int second;
        if (!read_int(text, pos + 1, 2, second)) return fail();
        if (second != 0)
            throw ParseError("timestamps must fall on whole minutes: '" + text + "'");
        pos += 3;
    }
    if (pos >= text.size())
        throw ParseError("timestamp lacks an explicit UTC offset: '" + text + "'");

    int offset_minutes = 0;
    const char sign = text[pos];
    if (sign == 'Z') {
        if (pos + 1 != text.size()) return fail();
    } else if (sign == '+' || sign == '-') {
        int oh, om = 0;
        if (!read_int(text, pos + 1, 2, oh)) return fail();
        std::size_t tail = pos + 3;
        if (tail < text.size()) {
            if (text[tail] == ':') ++tail;
            if (!read_int(text, tail, 2, om) || tail + 2 != text.size()) return fail();
        }
        offset_minutes = oh * 60 + om;
        if (sign == '-') offset_minutes = -offset_minutes;
    } else {
        return fail();
    }

    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59)
        return fail();

    const std::int64_t local = (days_from_civil(year, month, day) * 24 + hour) * 60 + minute;
    return local - offset_minutes;
}

Timestamp parse_iso_hour(const std::string& text) {
    const std::int64_t minutes = parse_iso_minutes(text);
    if (positive_mod(minutes, 60) != 0)
        throw ParseError("timestamp is not on the hourly grid: '" + text + "'");
    return Timestamp{floor_div(minutes, 60)};
}

Timestamp parse_iso_date(const std::string& text, int utc_offset_minutes) {
    int year, month, day;
    if (text.size() != 10 || !read_int(text, 0, 4, year) || text[4] != '-' ||
        !read_int(text, 5, 2, month) || text[7] != '-' || !read_int(text, 8, 2, day) ||
        month < 1 || month > 12 || day < 1 || day > 31)
        throw ParseError("invalid ISO date: '" + text + "'");
    const std::int64_t local_hours = days_from_civil(year, month, day) * 24;
    return Timestamp{floor_div(local_hours * 60 - utc_offset_minutes, 60)};
}

} // namespace dhf
