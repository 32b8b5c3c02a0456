#include "dhf/hourly_series.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dhf/csv.hpp"
#include "dhf/errors.hpp"

namespace dhf {

HourlySeries HourlySeries::from_points(std::string name,
                                       std::vector<std::pair<Timestamp, double>> points) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    HourlySeries s;
    s.name_ = std::move(name);
    s.stamps_.reserve(points.size());
    s.values_.reserve(points.size());
    for (const auto& [ts, v] : points) {
        if (!s.stamps_.empty() && s.stamps_.back() == ts)
            throw DuplicateTimestampError("series '" + s.name_ +
                                          "': duplicate timestamp " + to_iso(ts));
        if (!std::isfinite(v))
            throw ParseError("series '" + s.name_ + "': non-finite value at " +
                             to_iso(ts));
        s.stamps_.push_back(ts);
        s.values_.push_back(v);
    }
    return s;
}

std::optional<double> HourlySeries::at(Timestamp ts) const {
    const auto it = std::lower_bound(stamps_.begin(), stamps_.end(), ts);
    if (it == stamps_.end() || *it != ts) return std::nullopt;
    return values_[static_cast<std::size_t>(it - stamps_.begin())];
}

HourlySeries HourlySeries::slice(Timestamp start, Timestamp end) const {
    const auto lo = std::lower_bound(stamps_.begin(), stamps_.end(), start);
    const auto hi = std::upper_bound(stamps_.begin(), stamps_.end(), end);
    HourlySeries out;
    out.name_ = name_;
    out.stamps_.assign(lo, hi);
    out.values_.assign(values_.begin() + (lo - stamps_.begin()),
                       values_.begin() + (hi - stamps_.begin()));
    return out;
}

HourlySeries HourlySeries::renamed(std::string name) const {
    HourlySeries out = *this;
    out.name_ = std::move(name);
    return out;
}

AlignResult align(const std::vector<HourlySeries>& series_list) {
    if (series_list.empty())
        throw EmptyIntersectionError("align: no series given");
    for (const auto& s : series_list)
        if (s.empty())
            throw EmptyIntersectionError("align: series '" + s.name() + "' is empty");

    // intersect the (sorted) hour sets
    std::vector<Timestamp> common = series_list.front().stamps();
    for (std::size_t i = 1; i < series_list.size(); ++i) {
        std::vector<Timestamp> next;
        next.reserve(common.size());
        const auto& other = series_list[i].stamps();
        std::set_intersection(common.begin(), common.end(), other.begin(),
                              other.end(), std::back_inserter(next));
        common.swap(next);
    }
    if (common.empty())
        throw EmptyIntersectionError("align: series share no common hour");

    AlignResult res;
    res.start = common.front();
    res.end = common.back();
    for (const auto& s : series_list) {
        std::vector<std::pair<Timestamp, double>> pts;
        pts.reserve(common.size());
        for (const Timestamp ts : common) pts.emplace_back(ts, *s.at(ts));
        res.aligned.push_back(HourlySeries::from_points(s.name(), std::move(pts)));
    }
    return res;
}

SplitResult split_train_test(const HourlySeries& series, double train_fraction,
                             int utc_offset_minutes) {
    if (series.empty()) throw TooShortError("split: empty series");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidSpecError("split: train_fraction must lie in (0,1)");

    const Timestamp first_day = day_start(series.first(), utc_offset_minutes);
    const Timestamp last_day = day_start(series.last(), utc_offset_minutes);
    const std::int64_t total_days = (last_day.hours - first_day.hours) / 24 + 1;
    if (total_days < 2)
        throw TooShortError("split: series '" + series.name() +
                            "' spans fewer than two days");

    std::int64_t train_days =
        static_cast<std::int64_t>(std::floor(train_fraction * static_cast<double>(total_days)));
    train_days = std::clamp<std::int64_t>(train_days, 1, total_days - 1);
    const Timestamp boundary = first_day.plus_days(train_days);

    SplitResult out;
    out.train = series.slice(series.first(), boundary.plus_hours(-1));
    out.test = series.slice(boundary, series.last());
    return out;
}

DailyBlocksResult daily_blocks(const HourlySeries& series, int utc_offset_minutes) {
    DailyBlocksResult res;
    if (series.empty()) return res;

    const Timestamp first_day = day_start(series.first(), utc_offset_minutes);
    const Timestamp last_day = day_start(series.last(), utc_offset_minutes);
    int index = 0;
    for (Timestamp day = first_day; day <= last_day; day = day.plus_days(1)) {
        DailyBlock block;
        bool complete = true;
        bool any = false;
        for (int h = 0; h < 24; ++h) {
            const auto v = series.at(day.plus_hours(h));
            if (!v) {
                complete = false;
            } else {
                any = true;
                block.values[static_cast<std::size_t>(h)] = *v;
            }
        }
        if (complete) {
            block.index = ++index;
            block.day_start = day;
            res.blocks.push_back(block);
        } else if (any) {
            res.skipped_days.push_back(day);
        }
        // days entirely outside the series (no value at all) are not reported
    }
    return res;
}

HourlySeries load_series_csv(const std::string& path, const std::string& name) {
    const csv::Table table = csv::read_file(path);
    if (table.header.size() != 2 || table.header[0] != "timestamp" ||
        table.header[1] != "value")
        throw ParseError("'" + path + "': expected header 'timestamp,value'");

    // group sub-hourly samples by their containing hour; mean per hour
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, double>>> by_hour;
    for (const auto& row : table.rows) {
        if (row.size() != 2)
            throw ParseError("'" + path + "': malformed row");
        const std::int64_t minutes = parse_iso_minutes(row[0]);
        const double value = csv::parse_double(row[1]);
        std::int64_t hour = minutes / 60;
        if (minutes < 0 && minutes % 60 != 0) --hour;
        by_hour[hour].emplace_back(minutes, value);
    }

    std::vector<std::pair<Timestamp, double>> points;
    points.reserve(by_hour.size());
    for (auto& [hour, samples] : by_hour) {
        std::sort(samples.begin(), samples.end());
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (samples[i].first == samples[i - 1].first)
                throw DuplicateTimestampError("'" + path + "': duplicate timestamp in hour " +
                                              to_iso(Timestamp{hour}));
        double sum = 0.0;
        for (const auto& [m, v] : samples) sum += v;
        points.emplace_back(Timestamp{hour}, sum / static_cast<double>(samples.size()));
    }
    return HourlySeries::from_points(name, std::move(points));
}

void save_series_csv(const HourlySeries& series, const std::string& path) {
    csv::Table t;
    t.header = {"timestamp", "value"};
    t.rows.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        t.rows.push_back({to_iso(series.stamps()[i]), csv::format_double(series.values()[i])});
    csv::write_file(path, t);
}

} // namespace dhf
