#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dhf/timestamp.hpp"

namespace dhf {

// Hourly values with explicit gaps: a missing hour simply has no entry.
// Immutable after construction, so instances are safe to share across
// concurrent readers.
class HourlySeries {
public:
    HourlySeries() = default;

    // Points must be finite; construction sorts them and rejects duplicates.
    static HourlySeries from_points(std::string name,
                                    std::vector<std::pair<Timestamp, double>> points);

    const std::string& name() const { return name_; }
    std::size_t size() const { return stamps_.size(); }
    bool empty() const { return stamps_.empty(); }

    const std::vector<Timestamp>& stamps() const { return stamps_; }
    const std::vector<double>& values() const { return values_; }

    Timestamp first() const { return stamps_.front(); }
    Timestamp last() const { return stamps_.back(); }

    std::optional<double> at(Timestamp ts) const;
    bool has(Timestamp ts) const { return at(ts).has_value(); }

    // All entries with start <= t <= end.
    HourlySeries slice(Timestamp start, Timestamp end) const;

    HourlySeries renamed(std::string name) const;

private:
    std::string name_;
    std::vector<Timestamp> stamps_; // strictly increasing
    std::vector<double> values_;    // finite
};

// One calendar day that has all 24 hours present.
struct DailyBlock {
    int index = 0;             // 1-based position among complete days
    Timestamp day_start{};     // local midnight as UTC hour
    std::array<double, 24> values{};
};

struct AlignResult {
    Timestamp start{};
    Timestamp end{};
    std::vector<HourlySeries> aligned;
};

// Maximal common range where every series has a value at every hour; hours
// missing in any series are dropped from all of them.
// Throws EmptyIntersectionError when no common hour exists.
AlignResult align(const std::vector<HourlySeries>& series_list);

struct SplitResult {
    HourlySeries train;
    HourlySeries test;
};

// Chronological split at a day boundary: the boundary is the local midnight
// after floor(train_fraction * total_days) days. Throws TooShortError for
// series spanning fewer than two days.
SplitResult split_train_test(const HourlySeries& series, double train_fraction,
                             int utc_offset_minutes = 0);

struct DailyBlocksResult {
    std::vector<DailyBlock> blocks;
    std::vector<Timestamp> skipped_days; // day starts with at least one gap
};

DailyBlocksResult daily_blocks(const HourlySeries& series,
                               int utc_offset_minutes = 0);

// CSV ingestion, header "timestamp,value". Rows may be in any order and may
// be sub-hourly (e.g. quarter-hourly); values within the same hour are
// averaged. Exact duplicate timestamps are an error.
HourlySeries load_series_csv(const std::string& path, const std::string& name);

void save_series_csv(const HourlySeries& series, const std::string& path);

} // namespace dhf
