#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dhf/hourly_series.hpp"

namespace dhf {

// Synthetic district-heating dataset: outdoor temperature with seasonal and
// diurnal cycles plus AR(1) weather noise, and a load that responds to
// temperature below a threshold with weekday-morning and evening peaks.
struct GeneratorConfig {
    std::uint64_t seed = 1;
    int months = 27;                      // calendar months from start_date
    int start_year = 2014;
    int start_month = 11;

    double base_load_kw = 380.0;
    double temp_sensitivity_kw_per_degc = 115.0;
    double temp_threshold_degc = 15.0;
    double weekday_morning_peak_kw = 170.0;
    double noise_std_kw = 35.0;
    std::optional<std::array<double, 24>> dt_profile; // control signal, default zero

    // temperature model
    double temp_mean_degc = 7.0;
    double temp_seasonal_amplitude_degc = 10.0;
    double temp_diurnal_amplitude_degc = 2.5;
    double temp_noise_std_degc = 3.5;
    double temp_ar1_coeff = 0.9;

    // shape of the within-day load profile on top of the temperature response
    double hod_profile_amplitude_kw = 130.0;

    void validate() const; // throws InvalidSpecError
};

struct GeneratedData {
    HourlySeries load;          // kW
    HourlySeries dt;            // control signal, degC
    HourlySeries temp_forecast; // degC
};

GeneratedData generate(const GeneratorConfig& config);

// Pearson product-moment correlation; throws ZeroVarianceError /
// LengthMismatchError.
double ppmcc(const std::vector<double>& x, const std::vector<double>& y);

// Lag-h Pearson correlation of the series with itself, h = 0..max_lag.
std::vector<double> autocorrelation(const std::vector<double>& series, int max_lag);

} // namespace dhf
