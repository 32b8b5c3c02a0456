#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dhf/hourly_series.hpp"
#include "dhf/timestamp.hpp"

namespace dhf {

// The three input configurations: the full set, the set without control
// signal lags, and the set with calendar + temperature only.
enum class FeatureSetKind { FullSet, SetMinusDT, SetMinusLags };

std::string to_string(FeatureSetKind kind);
FeatureSetKind feature_set_from_string(const std::string& s);

int feature_count(FeatureSetKind kind); // 8 / 6 / 4
std::vector<std::string> feature_names(FeatureSetKind kind);

struct CalendarFeatures {
    int hod = 0; // 0..23
    int dow = 0; // Monday = 0
    int doy = 1; // 1..366
};

CalendarFeatures calendar_features(Timestamp ts, int utc_offset_minutes = 0);

// One engineered row before flattening; the optional lags are present iff the
// feature-set kind requires them.
struct FeatureVector {
    int hod = 0;
    int dow = 0;
    int doy = 1;
    double t_out_forecast = 0.0;
    std::optional<double> p_lag24;
    std::optional<double> p_lag168;
    std::optional<double> dt_lag24;
    std::optional<double> dt_lag168;

    // Flattened row in the fixed column order (hod, dow, doy, t_out,
    // p24, p168, dt24, dt168) restricted to the kind. Throws InvalidSpecError
    // if the optional fields don't match the kind.
    std::vector<double> to_row(FeatureSetKind kind) const;
};

struct FeatureMatrix {
    FeatureSetKind kind = FeatureSetKind::FullSet;
    std::vector<Timestamp> stamps;  // one per row (the target hour)
    std::vector<double> x;          // row-major, rows() x feature_count(kind)
    std::vector<double> targets;    // empty, or one load value per row

    std::size_t rows() const { return stamps.size(); }
    std::size_t cols() const { return static_cast<std::size_t>(feature_count(kind)); }
    const double* row(std::size_t r) const { return x.data() + r * cols(); }
    double at(std::size_t r, std::size_t c) const { return x[r * cols() + c]; }
    bool has_targets() const { return !targets.empty(); }

    void append_row(Timestamp ts, const std::vector<double>& row_values,
                    std::optional<double> target);
};

// Training matrix over [start, end] (inclusive hours): one row per hour where
// every required input exists, target = load at that hour. Rows whose lag
// sources fall in gaps are omitted. Throws InsufficientHistoryError when the
// 168 h lookback before `start` is unavailable for a lagged kind.
FeatureMatrix build_matrix(const HourlySeries& load, const HourlySeries& dt,
                           const HourlySeries& temp_forecast, FeatureSetKind kind,
                           Timestamp start, Timestamp end,
                           int utc_offset_minutes = 0);

// The 24 input rows for forecast day k (no targets). Lag sources must lie
// strictly before the day; only the day-k temperature forecast may be used
// from the future. Throws MissingForecastError / InsufficientHistoryError.
FeatureMatrix forecast_inputs(Timestamp day_start_ts, FeatureSetKind kind,
                              const HourlySeries& load, const HourlySeries& dt,
                              const HourlySeries& temp_forecast,
                              int utc_offset_minutes = 0);

// Inspection/export format: header names each feature column; a `target`
// column is appended when targets are present.
void save_matrix_csv(const FeatureMatrix& m, const std::string& path);

} // namespace dhf
