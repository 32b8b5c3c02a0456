#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dhf/aggregation.hpp"
#include "dhf/expert.hpp"
#include "dhf/features.hpp"
#include "dhf/hourly_series.hpp"

namespace dhf {

enum class RetrainMode { None, Daily };

std::string to_string(RetrainMode mode);
RetrainMode retrain_mode_from_string(const std::string& s);

struct BacktestConfig {
    double train_fraction = 0.75;
    AggregatorConfig aggregator;
    // computes eta = sqrt(8 ln N / T) from the scheduled number of test days
    bool auto_eta = true;
    RetrainMode retrain = RetrainMode::None;
    int moving_average_window_days = 30;
    std::optional<double> peak_threshold_kw = 2700.0;
    // summary sub-range [first day, last day] as local day starts
    std::optional<std::pair<Timestamp, Timestamp>> summary_range;
    int utc_offset_minutes = 0;

    void validate() const;
};

// The fit/predict surface the day loop drives. Production experts wrap an
// ExpertSpec and its fitted model; tests substitute fakes (e.g. to exercise
// the failure path).
class BacktestExpert {
public:
    virtual ~BacktestExpert() = default;
    virtual const std::string& name() const = 0;
    virtual std::string family_label() const = 0; // lr / etr / ann / svm
    virtual FeatureSetKind feature_kind() const = 0;
    virtual void fit(const FeatureMatrix& train, int jobs) = 0;
    virtual std::vector<double> predict(const FeatureMatrix& inputs, int jobs) const = 0;
};

std::vector<std::unique_ptr<BacktestExpert>>
make_backtest_experts(const std::vector<ExpertSpec>& roster);

struct DayRecord {
    int round = 0; // 1-based among scored days
    Timestamp day_start{};
    std::array<double, 24> actual{};
    std::array<double, 24> forecast{};
    std::vector<std::array<double, 24>> advice; // per expert
    std::vector<double> weights_used;           // weights at combine time
    LossRecord losses;
};

struct SkippedDay {
    Timestamp day_start{};
    std::string reason;
};

struct SummaryEntry {
    std::string name;
    std::string family;
    double mape = 0.0; // mean of per-day MAPEs over scored days
    int days = 0;
};

struct SummaryTable {
    std::vector<SummaryEntry> experts; // roster order
    SummaryEntry forecaster;
};

struct PeakFlag {
    Timestamp day_start{};
    int hour = 0;
    double forecast_kw = 0.0;
};

struct BacktestReport {
    std::vector<std::string> expert_names;
    std::vector<std::string> expert_families;
    RetrainMode retrain = RetrainMode::None;
    Timestamp test_start{};
    Timestamp test_end{}; // last test day start
    std::vector<DayRecord> days;
    std::vector<SkippedDay> skipped;
    std::vector<std::string> events; // kept-model retrain failures and the like
    std::vector<double> regret_curve;
    double eta_used = 0.0;
    SummaryTable summary;
    std::optional<SummaryTable> window_summary;
    std::vector<std::vector<double>> ma_expert; // per expert, per scored day
    std::vector<double> ma_forecaster;
    std::vector<PeakFlag> peak_flags;
};

struct BacktestInputs {
    HourlySeries load;
    HourlySeries dt;
    HourlySeries temp_forecast;
};

// Walks the test range day by day: build per-kind forecast inputs, collect
// advice, combine with the current weights, reveal the outcome, score, update
// the aggregator, and (optionally) refit every expert with the revealed day
// appended. Days with missing outcomes or advice are skipped with no weight
// update; a single expert failing inside a day is scored with the worst
// scaled loss for that round.
BacktestReport run_backtest(const BacktestInputs& data,
                            std::vector<std::unique_ptr<BacktestExpert>>& experts,
                            const BacktestConfig& config, int jobs = 1);

// Trailing mean over the available scored days (shorter at the start).
std::vector<double> moving_average(const std::vector<double>& series, int window_days);

// Per-expert + forecaster MAPE over scored days in [first_day, last_day]
// (whole report when absent). Throws EmptyRangeError.
SummaryTable summarize(const BacktestReport& report,
                       std::optional<std::pair<Timestamp, Timestamp>> range = {});

std::vector<PeakFlag> peak_flags(const BacktestReport& report, double threshold_kw);

// Report files: summary.csv, daily.csv, weights.csv, regret.csv, flags.csv
// (plus skipped.csv for the skip log).
void write_report_csv(const BacktestReport& report, const std::string& dir);

// Reloads daily.csv (as written above) for range re-analysis; advice columns
// are not stored, so records come back without them.
struct DailyCsv {
    std::vector<std::string> expert_names;
    std::vector<DayRecord> days;
};
DailyCsv load_daily_csv(const std::string& path);

} // namespace dhf
