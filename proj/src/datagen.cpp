#include "dhf/datagen.hpp"

#include <cmath>

#include "dhf/errors.hpp"
#include "dhf/rng.hpp"

namespace dhf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Morning and evening bumps with a night dip; deliberately not linear in the
// raw hour-of-day integer.
double hod_shape(int hour) {
    const double h = static_cast<double>(hour);
    const double morning = std::exp(-(h - 7.5) * (h - 7.5) / 4.0);
    const double evening = 0.8 * std::exp(-(h - 18.5) * (h - 18.5) / 6.0);
    return morning + evening - 0.35;
}

} // namespace

void GeneratorConfig::validate() const {
    if (months < 2) throw InvalidSpecError("generator: months must be >= 2");
    if (start_month < 1 || start_month > 12)
        throw InvalidSpecError("generator: start_month must be 1..12");
    const double magnitudes[] = {base_load_kw,        temp_sensitivity_kw_per_degc,
                                 weekday_morning_peak_kw, noise_std_kw,
                                 temp_seasonal_amplitude_degc,
                                 temp_diurnal_amplitude_degc, temp_noise_std_degc,
                                 hod_profile_amplitude_kw};
    for (double m : magnitudes)
        if (!(m >= 0.0) || !std::isfinite(m))
            throw InvalidSpecError("generator: magnitudes must be >= 0 and finite");
    if (!(temp_ar1_coeff >= 0.0 && temp_ar1_coeff < 1.0))
        throw InvalidSpecError("generator: temp_ar1_coeff must lie in [0,1)");
}

GeneratedData generate(const GeneratorConfig& config) {
    config.validate();

    const Timestamp start = make_timestamp(config.start_year, config.start_month, 1, 0);
    int end_year = config.start_year;
    int end_month = config.start_month + config.months;
    while (end_month > 12) {
        end_month -= 12;
        ++end_year;
    }
    const Timestamp end = make_timestamp(end_year, end_month, 1, 0); // exclusive
    const std::size_t n_hours = static_cast<std::size_t>(end.hours - start.hours);

    // independent noise streams so the deterministic components are identical
    // across seeds
    Rng temp_rng(mix_seed(config.seed, 1));
    Rng load_rng(mix_seed(config.seed, 2));

    std::vector<std::pair<Timestamp, double>> temp_pts, load_pts, dt_pts;
    temp_pts.reserve(n_hours);
    load_pts.reserve(n_hours);
    dt_pts.reserve(n_hours);

    // stationary AR(1): e_t = rho e_{t-1} + sigma sqrt(1-rho^2) z_t
    const double rho = config.temp_ar1_coeff;
    const double innovation_scale =
        config.temp_noise_std_degc * std::sqrt(1.0 - rho * rho);
    double ar_state = config.temp_noise_std_degc * temp_rng.normal();

    for (std::size_t i = 0; i < n_hours; ++i) {
        const Timestamp ts = start.plus_hours(static_cast<std::int64_t>(i));
        const int hod = hour_of_day(ts);
        const int dow = day_of_week_monday0(ts);
        const int doy = day_of_year(ts);

        // coldest around mid-January, warmest mid-afternoon
        const double seasonal = -config.temp_seasonal_amplitude_degc *
                                std::cos(2.0 * kPi * (doy - 15.0) / 365.25);
        const double diurnal = -config.temp_diurnal_amplitude_degc *
                               std::cos(2.0 * kPi * (hod - 14.0) / 24.0);
        ar_state = rho * ar_state + innovation_scale * temp_rng.normal();
        const double temp = config.temp_mean_degc + seasonal + diurnal + ar_state;

        const double heating =
            config.temp_sensitivity_kw_per_degc *
            std::max(0.0, config.temp_threshold_degc - temp);
        const bool weekday = dow < 5;
        const double morning_bump =
            (weekday && hod >= 6 && hod <= 8) ? config.weekday_morning_peak_kw : 0.0;
        const double profile = config.hod_profile_amplitude_kw * hod_shape(hod);
        const double noise = config.noise_std_kw * load_rng.normal();
        const double load =
            std::max(0.0, config.base_load_kw + heating + morning_bump + profile + noise);

        const double dt_value =
            config.dt_profile ? (*config.dt_profile)[static_cast<std::size_t>(hod)] : 0.0;

        temp_pts.emplace_back(ts, temp);
        load_pts.emplace_back(ts, load);
        dt_pts.emplace_back(ts, dt_value);
    }

    GeneratedData out;
    out.load = HourlySeries::from_points("load", std::move(load_pts));
    out.dt = HourlySeries::from_points("dt", std::move(dt_pts));
    out.temp_forecast = HourlySeries::from_points("temp_forecast", std::move(temp_pts));
    return out;
}

double ppmcc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw LengthMismatchError("ppmcc: series lengths differ");
    const std::size_t n = x.size();
    if (n < 2) throw LengthMismatchError("ppmcc: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ZeroVarianceError("ppmcc: a series has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag) {
    if (max_lag < 0) throw InvalidSpecError("autocorrelation: max_lag must be >= 0");
    if (series.size() <= static_cast<std::size_t>(max_lag))
        throw LengthMismatchError("autocorrelation: series shorter than max_lag");

    std::vector<double> acf;
    acf.reserve(static_cast<std::size_t>(max_lag) + 1);
    acf.push_back(1.0);
    for (int h = 1; h <= max_lag; ++h) {
        const std::size_t m = series.size() - static_cast<std::size_t>(h);
        std::vector<double> a(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(m));
        std::vector<double> b(series.begin() + h, series.end());
        acf.push_back(ppmcc(a, b));
    }
    return acf;
}

} // namespace dhf
