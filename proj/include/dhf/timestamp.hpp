#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace dhf {

// UTC calendar time truncated to the hour, stored as hours since the Unix
// epoch. Total ordering matches chronological order.
struct Timestamp {
    std::int64_t hours = 0;

    auto operator<=>(const Timestamp&) const = default;

    Timestamp plus_hours(std::int64_t n) const { return Timestamp{hours + n}; }
    Timestamp plus_days(std::int64_t n) const { return Timestamp{hours + 24 * n}; }
};

struct CivilTime {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    int hour = 0;  // 0..23
};

// Proleptic Gregorian day count relative to 1970-01-01.
std::int64_t days_from_civil(int y, int m, int d);
CivilTime civil_from_days(std::int64_t days);

Timestamp make_timestamp(int year, int month, int day, int hour);

// Calendar decomposition at a fixed UTC offset (minutes). Day boundaries in
// this project are local midnights of that offset; no DST.
CivilTime civil_of(Timestamp ts, int utc_offset_minutes = 0);
int hour_of_day(Timestamp ts, int utc_offset_minutes = 0);
int day_of_week_monday0(Timestamp ts, int utc_offset_minutes = 0);
int day_of_year(Timestamp ts, int utc_offset_minutes = 0);

// UTC timestamp of the local midnight starting the day that contains ts.
Timestamp day_start(Timestamp ts, int utc_offset_minutes = 0);

// "YYYY-MM-DDTHH:00:00+00:00"
std::string to_iso(Timestamp ts);

// Date-only formatting of the local day containing ts.
std::string to_iso_date(Timestamp ts, int utc_offset_minutes = 0);

// Parses ISO-8601 with an explicit offset (Z, +HH:MM or +HHMM) down to minute
// precision; used by CSV ingestion where quarter-hourly stamps are legal.
// Returns minutes since epoch, UTC. Throws ParseError.
std::int64_t parse_iso_minutes(const std::string& text);

// As above but requires a whole hour.
Timestamp parse_iso_hour(const std::string& text);

// "YYYY-MM-DD" at the given offset -> local midnight as UTC timestamp.
Timestamp parse_iso_date(const std::string& text, int utc_offset_minutes = 0);

} // namespace dhf
