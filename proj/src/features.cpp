#include "dhf/features.hpp"

#include <cmath>

#include "dhf/csv.hpp"
#include "dhf/errors.hpp"

namespace dhf {

std::string to_string(FeatureSetKind kind) {
    switch (kind) {
        case FeatureSetKind::FullSet: return "full";
        case FeatureSetKind::SetMinusDT: return "no_dt";
        case FeatureSetKind::SetMinusLags: return "no_lags";
    }
    throw InvalidSpecError("unknown feature-set kind");
}

FeatureSetKind feature_set_from_string(const std::string& s) {
    if (s == "full") return FeatureSetKind::FullSet;
    if (s == "no_dt") return FeatureSetKind::SetMinusDT;
    if (s == "no_lags") return FeatureSetKind::SetMinusLags;
    throw InvalidSpecError("unknown feature-set kind '" + s + "'");
}

int feature_count(FeatureSetKind kind) {
    switch (kind) {
        case FeatureSetKind::FullSet: return 8;
        case FeatureSetKind::SetMinusDT: return 6;
        case FeatureSetKind::SetMinusLags: return 4;
    }
    throw InvalidSpecError("unknown feature-set kind");
}

std::vector<std::string> feature_names(FeatureSetKind kind) {
    std::vector<std::string> names = {"hod", "dow", "doy", "t_out_forecast"};
    if (kind != FeatureSetKind::SetMinusLags) {
        names.push_back("p_lag24");
        names.push_back("p_lag168");
    }
    if (kind == FeatureSetKind::FullSet) {
        names.push_back("dt_lag24");
        names.push_back("dt_lag168");
    }
    return names;
}

CalendarFeatures calendar_features(Timestamp ts, int utc_offset_minutes) {
    CalendarFeatures c;
    c.hod = hour_of_day(ts, utc_offset_minutes);
    c.dow = day_of_week_monday0(ts, utc_offset_minutes);
    c.doy = day_of_year(ts, utc_offset_minutes);
    return c;
}

std::vector<double> FeatureVector::to_row(FeatureSetKind kind) const {
    const bool wants_p = kind != FeatureSetKind::SetMinusLags;
    const bool wants_dt = kind == FeatureSetKind::FullSet;
    if (p_lag24.has_value() != wants_p || p_lag168.has_value() != wants_p ||
        dt_lag24.has_value() != wants_dt || dt_lag168.has_value() != wants_dt)
        throw InvalidSpecError("feature vector fields do not match kind " +
                               to_string(kind));

    std::vector<double> row = {static_cast<double>(hod), static_cast<double>(dow),
                               static_cast<double>(doy), t_out_forecast};
    if (wants_p) {
        row.push_back(*p_lag24);
        row.push_back(*p_lag168);
    }
    if (wants_dt) {
        row.push_back(*dt_lag24);
        row.push_back(*dt_lag168);
    }
    for (double v : row)
        if (!std::isfinite(v)) throw InvalidSpecError("non-finite feature value");
    return row;
}

void FeatureMatrix::append_row(Timestamp ts, const std::vector<double>& row_values,
                               std::optional<double> target) {
    if (row_values.size() != cols())
        throw LengthMismatchError("feature row width does not match kind");
    if (has_targets() != target.has_value() && !stamps.empty())
        throw LengthMismatchError("mixed rows with and without targets");
    stamps.push_back(ts);
    x.insert(x.end(), row_values.begin(), row_values.end());
    if (target) targets.push_back(*target);
}

namespace {

// Assembles the row for one hour, or nullopt when a lag source is missing.
std::optional<FeatureVector> row_at(Timestamp ts, FeatureSetKind kind,
                                    const HourlySeries& load, const HourlySeries& dt,
                                    const HourlySeries& temp_forecast,
                                    int utc_offset_minutes) {
    const auto t_out = temp_forecast.at(ts);
    if (!t_out) return std::nullopt;

    FeatureVector fv;
    const CalendarFeatures cal = calendar_features(ts, utc_offset_minutes);
    fv.hod = cal.hod;
    fv.dow = cal.dow;
    fv.doy = cal.doy;
    fv.t_out_forecast = *t_out;

    if (kind != FeatureSetKind::SetMinusLags) {
        const auto p24 = load.at(ts.plus_hours(-24));
        const auto p168 = load.at(ts.plus_hours(-168));
        if (!p24 || !p168) return std::nullopt;
        fv.p_lag24 = *p24;
        fv.p_lag168 = *p168;
    }
    if (kind == FeatureSetKind::FullSet) {
        const auto d24 = dt.at(ts.plus_hours(-24));
        const auto d168 = dt.at(ts.plus_hours(-168));
        if (!d24 || !d168) return std::nullopt;
        fv.dt_lag24 = *d24;
        fv.dt_lag168 = *d168;
    }
    return fv;
}

} // namespace

FeatureMatrix build_matrix(const HourlySeries& load, const HourlySeries& dt,
                           const HourlySeries& temp_forecast, FeatureSetKind kind,
                           Timestamp start, Timestamp end, int utc_offset_minutes) {
    if (kind != FeatureSetKind::SetMinusLags) {
        if (load.empty() || load.first() > start.plus_hours(-168))
            throw InsufficientHistoryError(
                "build_matrix: lagged kind '" + to_string(kind) +
                "' needs 168 h of history before " + to_iso(start));
    }

    FeatureMatrix m;
    m.kind = kind;
    for (Timestamp ts = start; ts <= end; ts = ts.plus_hours(1)) {
        const auto target = load.at(ts);
        if (!target) continue;
        const auto fv = row_at(ts, kind, load, dt, temp_forecast, utc_offset_minutes);
        if (!fv) continue;
        m.append_row(ts, fv->to_row(kind), *target);
    }
    return m;
}

FeatureMatrix forecast_inputs(Timestamp day_start_ts, FeatureSetKind kind,
                              const HourlySeries& load, const HourlySeries& dt,
                              const HourlySeries& temp_forecast,
                              int utc_offset_minutes) {
    FeatureMatrix m;
    m.kind = kind;
    for (int h = 0; h < 24; ++h) {
        const Timestamp ts = day_start_ts.plus_hours(h);
        if (!temp_forecast.has(ts))
            throw MissingForecastError("temperature forecast incomplete for day " +
                                       to_iso_date(day_start_ts, utc_offset_minutes));
        const auto fv = row_at(ts, kind, load, dt, temp_forecast, utc_offset_minutes);
        if (!fv)
            throw InsufficientHistoryError("lag sources missing for day " +
                                           to_iso_date(day_start_ts, utc_offset_minutes) +
                                           " hour " + std::to_string(h));
        m.append_row(ts, fv->to_row(kind), std::nullopt);
    }
    return m;
}

void save_matrix_csv(const FeatureMatrix& m, const std::string& path) {
    csv::Table t;
    t.header.push_back("timestamp");
    for (const auto& n : feature_names(m.kind)) t.header.push_back(n);
    if (m.has_targets()) t.header.push_back("target");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<std::string> row;
        row.push_back(to_iso(m.stamps[r]));
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(csv::format_double(m.at(r, c)));
        if (m.has_targets()) row.push_back(csv::format_double(m.targets[r]));
        t.rows.push_back(std::move(row));
    }
    csv::write_file(path, t);
}

} // namespace dhf
