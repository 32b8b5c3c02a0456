#include "dhf/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "dhf/csv.hpp"
#include "dhf/errors.hpp"
#include "dhf/parallel.hpp"

namespace dhf {

std::string to_string(RetrainMode mode) {
    return mode == RetrainMode::Daily ? "daily" : "none";
}

RetrainMode retrain_mode_from_string(const std::string& s) {
    if (s == "none") return RetrainMode::None;
    if (s == "daily") return RetrainMode::Daily;
    throw InvalidSpecError("unknown retrain mode '" + s + "'");
}

void BacktestConfig::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidSpecError("backtest: train_fraction must lie in (0,1)");
    if (moving_average_window_days < 1)
        throw InvalidSpecError("backtest: moving-average window must be >= 1");
    if (peak_threshold_kw && !(*peak_threshold_kw > 0.0))
        throw InvalidSpecError("backtest: peak threshold must be > 0");
    if (summary_range && summary_range->second < summary_range->first)
        throw EmptyRangeError("backtest: summary range is reversed");
}

namespace {

class RosterExpert final : public BacktestExpert {
public:
    explicit RosterExpert(ExpertSpec spec) : spec_(std::move(spec)) {}

    const std::string& name() const override { return spec_.name; }
    std::string family_label() const override { return to_string(spec_.family); }
    FeatureSetKind feature_kind() const override { return spec_.feature_kind; }

    void fit(const FeatureMatrix& train, int jobs) override {
        model_ = dhf::fit(spec_, train, jobs); // strong guarantee: old model kept on throw
    }

    std::vector<double> predict(const FeatureMatrix& inputs, int jobs) const override {
        if (!model_) throw InvalidSpecError("expert '" + spec_.name + "' is not fitted");
        return model_->predict(inputs, jobs);
    }

private:
    ExpertSpec spec_;
    std::optional<ExpertModel> model_;
};

// Runs fn(i) for every expert, serially or across threads; exceptions are
// collected per index instead of escaping the parallel region.
std::vector<std::string> for_each_expert(std::size_t n, int jobs,
                                         const std::function<void(std::size_t)>& fn) {
    std::vector<std::string> errors(n);
    const auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    if (par::resolve_jobs(jobs) <= 1) {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
    } else {
        par::for_each_index_parallel(n, jobs, guarded);
    }
    return errors;
}

} // namespace

std::vector<std::unique_ptr<BacktestExpert>>
make_backtest_experts(const std::vector<ExpertSpec>& roster) {
    std::vector<std::unique_ptr<BacktestExpert>> experts;
    experts.reserve(roster.size());
    for (const ExpertSpec& spec : roster)
        experts.push_back(std::make_unique<RosterExpert>(spec));
    return experts;
}

BacktestReport run_backtest(const BacktestInputs& data,
                            std::vector<std::unique_ptr<BacktestExpert>>& experts,
                            const BacktestConfig& config, int jobs) {
    config.validate();
    if (experts.empty()) throw InvalidSpecError("backtest: no experts");

    const AlignResult aligned = align({data.load, data.dt, data.temp_forecast});
    const HourlySeries& load = aligned.aligned[0];
    const HourlySeries& dt = aligned.aligned[1];
    const HourlySeries& temp = aligned.aligned[2];
    const int offset = config.utc_offset_minutes;

    const SplitResult split = split_train_test(load, config.train_fraction, offset);
    const Timestamp test_start_day = day_start(split.test.first(), offset);
    const Timestamp last_day = day_start(load.last(), offset);

    BacktestReport report;
    report.retrain = config.retrain;
    report.test_start = test_start_day;
    report.test_end = last_day;
    for (const auto& e : experts) {
        report.expert_names.push_back(e->name());
        report.expert_families.push_back(e->family_label());
    }

    // one training matrix per feature-set kind in use; lagged kinds lose the
    // first week of history to the lookback
    std::map<FeatureSetKind, FeatureMatrix> train_matrices;
    const Timestamp train_last_hour = test_start_day.plus_hours(-1);
    for (const auto& e : experts) {
        const FeatureSetKind kind = e->feature_kind();
        if (train_matrices.count(kind)) continue;
        const Timestamp start = kind == FeatureSetKind::SetMinusLags
                                    ? aligned.start
                                    : aligned.start.plus_hours(168);
        if (start > train_last_hour)
            throw TooShortError("backtest: training range shorter than the lag lookback");
        train_matrices[kind] =
            build_matrix(load, dt, temp, kind, start, train_last_hour, offset);
        if (!train_matrices[kind].has_targets())
            throw TooShortError("backtest: no training rows for kind " + to_string(kind));
    }

    {
        const auto errors = for_each_expert(experts.size(), jobs, [&](std::size_t i) {
            experts[i]->fit(train_matrices.at(experts[i]->feature_kind()),
                            par::resolve_jobs(jobs) <= 1 ? jobs : 1);
        });
        for (std::size_t i = 0; i < errors.size(); ++i)
            if (!errors[i].empty())
                throw InvalidSpecError("backtest: initial fit of '" +
                                       experts[i]->name() + "' failed: " + errors[i]);
    }

    AggregatorConfig agg = config.aggregator;
    agg.n_experts = static_cast<int>(experts.size());
    if (config.auto_eta) {
        const double scheduled_days =
            static_cast<double>((last_day.hours - test_start_day.hours) / 24 + 1);
        agg.eta = std::sqrt(8.0 * std::log(static_cast<double>(agg.n_experts)) /
                            std::max(1.0, scheduled_days));
    }
    report.eta_used = agg.eta;
    AggregatorState state = make_state(agg);

    const std::size_t n_experts = experts.size();
    for (Timestamp day = test_start_day; day <= last_day; day = day.plus_days(1)) {
        // outcome block
        std::array<double, 24> actual{};
        bool actual_complete = true;
        for (int h = 0; h < 24 && actual_complete; ++h) {
            const auto v = load.at(day.plus_hours(h));
            if (v)
                actual[static_cast<std::size_t>(h)] = *v;
            else
                actual_complete = false;
        }
        if (!actual_complete) {
            report.skipped.push_back({day, "missing actual load"});
            continue;
        }
        if (std::any_of(actual.begin(), actual.end(), [](double v) { return v == 0.0; })) {
            report.skipped.push_back({day, "zero actual value"});
            continue;
        }

        //  per-kind inputs; a missing lag source or forecast hour skips the
        //  whole day so that every expert is scored on identical days
        std::map<FeatureSetKind, FeatureMatrix> inputs;
        bool day_ok = true;
        std::string skip_reason;
        for (const auto& e : experts) {
            const FeatureSetKind kind = e->feature_kind();
            if (inputs.count(kind)) continue;
            try {
                inputs[kind] = forecast_inputs(day, kind, load, dt, temp, offset);
            } catch (const Error& err) {
                day_ok = false;
                skip_reason = err.what();
                break;
            }
        }
        if (!day_ok) {
            report.skipped.push_back({day, "advice unavailable: " + skip_reason});
            continue;
        }

        // expert advice
        std::vector<std::array<double, 24>> advice(n_experts);
        std::vector<std::vector<double>> raw_advice(n_experts);
        const auto advice_errors = for_each_expert(n_experts, jobs, [&](std::size_t i) {
            raw_advice[i] = experts[i]->predict(inputs.at(experts[i]->feature_kind()),
                                                par::resolve_jobs(jobs) <= 1 ? jobs : 1);
        });
        std::vector<bool> failed(n_experts, false);
        std::size_t n_failed = 0;
        for (std::size_t i = 0; i < n_experts; ++i) {
            if (!advice_errors[i].empty() || raw_advice[i].size() != 24) {
                failed[i] = true;
                ++n_failed;
                advice[i].fill(0.0);
                report.events.push_back("day " + to_iso_date(day, offset) + ": expert '" +
                                        experts[i]->name() + "' failed: " +
                                        (advice_errors[i].empty() ? "short prediction"
                                                                  : advice_errors[i]));
            } else {
                std::copy(raw_advice[i].begin(), raw_advice[i].end(), advice[i].begin());
            }
        }
        if (n_failed == n_experts) {
            report.skipped.push_back({day, "all experts failed"});
            continue;
        }

        // combine with the current weights; failed experts drop out of the
        // combination for this day only (weights renormalized)
        std::vector<double> combine_weights = state.weights;
        if (n_failed > 0) {
            double live = 0.0;
            for (std::size_t i = 0; i < n_experts; ++i)
                if (!failed[i]) live += combine_weights[i];
            for (std::size_t i = 0; i < n_experts; ++i)
                combine_weights[i] = failed[i] ? 0.0 : combine_weights[i] / live;
        }
        const std::array<double, 24> forecast = combine(combine_weights, advice);

        DayRecord rec;
        rec.round = static_cast<int>(report.days.size()) + 1;
        rec.day_start = day;
        rec.actual = actual;
        rec.forecast = forecast;
        rec.advice = advice;
        rec.weights_used = state.weights;
        rec.losses.round = rec.round;
        rec.losses.expert_raw.resize(n_experts);
        rec.losses.expert_scaled.resize(n_experts);
        for (std::size_t i = 0; i < n_experts; ++i) {
            if (failed[i]) {
                rec.losses.expert_raw[i] = 100.0; // worst scaled loss
                rec.losses.expert_scaled[i] = 1.0;
            } else {
                rec.losses.expert_raw[i] = mape(actual, advice[i]);
                rec.losses.expert_scaled[i] = scale_loss(rec.losses.expert_raw[i]);
            }
        }
        rec.losses.forecaster_raw = mape(actual, forecast);
        rec.losses.forecaster_scaled = scale_loss(rec.losses.forecaster_raw);

        update(state, agg, rec.losses);
        report.days.push_back(std::move(rec));

        if (config.retrain == RetrainMode::Daily) {
            // reveal day k to the training sets, then refit everything
            for (auto& [kind, matrix] : train_matrices) {
                const FeatureMatrix extra =
                    build_matrix(load, dt, temp, kind, day, day.plus_hours(23), offset);
                matrix.stamps.insert(matrix.stamps.end(), extra.stamps.begin(),
                                     extra.stamps.end());
                matrix.x.insert(matrix.x.end(), extra.x.begin(), extra.x.end());
                matrix.targets.insert(matrix.targets.end(), extra.targets.begin(),
                                      extra.targets.end());
            }
            const auto refit_errors = for_each_expert(n_experts, jobs, [&](std::size_t i) {
                experts[i]->fit(train_matrices.at(experts[i]->feature_kind()),
                                par::resolve_jobs(jobs) <= 1 ? jobs : 1);
            });
            for (std::size_t i = 0; i < n_experts; ++i)
                if (!refit_errors[i].empty())
                    report.events.push_back("day " + to_iso_date(day, offset) +
                                            ": retrain of '" + experts[i]->name() +
                                            "' failed (kept previous model): " +
                                            refit_errors[i]);
        }
    }

    report.regret_curve = state.regret_history;
    report.summary = summarize(report);
    if (config.summary_range) report.window_summary = summarize(report, config.summary_range);

    for (std::size_t i = 0; i < n_experts; ++i) {
        std::vector<double> series;
        series.reserve(report.days.size());
        for (const DayRecord& d : report.days) series.push_back(d.losses.expert_raw[i]);
        report.ma_expert.push_back(moving_average(series, config.moving_average_window_days));
    }
    {
        std::vector<double> series;
        series.reserve(report.days.size());
        for (const DayRecord& d : report.days) series.push_back(d.losses.forecaster_raw);
        report.ma_forecaster = moving_average(series, config.moving_average_window_days);
    }
    if (config.peak_threshold_kw)
        report.peak_flags = peak_flags(report, *config.peak_threshold_kw);

    return report;
}

std::vector<double> moving_average(const std::vector<double>& series, int window_days) {
    if (window_days < 1) throw InvalidSpecError("moving average: window must be >= 1");
    std::vector<double> out;
    out.reserve(series.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        running += series[i];
        if (i >= static_cast<std::size_t>(window_days))
            running -= series[i - static_cast<std::size_t>(window_days)];
        const std::size_t width =
            std::min<std::size_t>(i + 1, static_cast<std::size_t>(window_days));
        out.push_back(running / static_cast<double>(width));
    }
    return out;
}

SummaryTable summarize(const BacktestReport& report,
                       std::optional<std::pair<Timestamp, Timestamp>> range) {
    if (range && range->second < range->first)
        throw EmptyRangeError("summarize: reversed range");

    const std::size_t n_experts = report.expert_names.size();
    std::vector<double> expert_sum(n_experts, 0.0);
    double forecaster_sum = 0.0;
    int days = 0;
    for (const DayRecord& d : report.days) {
        if (range && (d.day_start < range->first || d.day_start > range->second)) continue;
        for (std::size_t i = 0; i < n_experts; ++i)
            expert_sum[i] += d.losses.expert_raw[i];
        forecaster_sum += d.losses.forecaster_raw;
        ++days;
    }
    if (days == 0) throw EmptyRangeError("summarize: no scored day in range");

    SummaryTable table;
    for (std::size_t i = 0; i < n_experts; ++i)
        table.experts.push_back({report.expert_names[i], report.expert_families[i],
                                 expert_sum[i] / days, days});
    table.forecaster = {"forecaster", "forecaster", forecaster_sum / days, days};
    return table;
}

std::vector<PeakFlag> peak_flags(const BacktestReport& report, double threshold_kw) {
    std::vector<PeakFlag> flags;
    for (const DayRecord& d : report.days)
        for (int h = 0; h < 24; ++h)
            if (d.forecast[static_cast<std::size_t>(h)] > threshold_kw)
                flags.push_back({d.day_start, h, d.forecast[static_cast<std::size_t>(h)]});
    return flags;
}

void write_report_csv(const BacktestReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "'");
    const auto path = [&dir](const char* f) { return dir + "/" + f; };
    const std::size_t n_experts = report.expert_names.size();

    {
        csv::Table t;
        t.header = {"name", "family", "days", "mape", "window_mape"};
        const auto put = [&](const SummaryEntry& overall, const SummaryEntry* window) {
            t.rows.push_back({overall.name, overall.family, std::to_string(overall.days),
                              csv::format_double(overall.mape),
                              window ? csv::format_double(window->mape) : ""});
        };
        for (std::size_t i = 0; i < n_experts; ++i)
            put(report.summary.experts[i],
                report.window_summary ? &report.window_summary->experts[i] : nullptr);
        put(report.summary.forecaster,
            report.window_summary ? &report.window_summary->forecaster : nullptr);
        csv::write_file(path("summary.csv"), t);
    }

    {
        csv::Table t;
        t.header = {"date", "day_start_utc", "round"};
        for (int h = 0; h < 24; ++h) t.header.push_back("actual_h" + std::to_string(h));
        for (int h = 0; h < 24; ++h) t.header.push_back("forecast_h" + std::to_string(h));
        t.header.push_back("mape_forecaster");
        for (const auto& n : report.expert_names) t.header.push_back("mape_" + n);
        for (const DayRecord& d : report.days) {
            std::vector<std::string> row = {to_iso_date(d.day_start), to_iso(d.day_start),
                                            std::to_string(d.round)};
            for (double v : d.actual) row.push_back(csv::format_double(v));
            for (double v : d.forecast) row.push_back(csv::format_double(v));
            row.push_back(csv::format_double(d.losses.forecaster_raw));
            for (double v : d.losses.expert_raw) row.push_back(csv::format_double(v));
            t.rows.push_back(std::move(row));
        }
        csv::write_file(path("daily.csv"), t);
    }

    {
        csv::Table t;
        t.header = {"round", "expert", "weight", "loss_raw", "loss_scaled"};
        for (const DayRecord& d : report.days)
            for (std::size_t i = 0; i < n_experts; ++i)
                t.rows.push_back({std::to_string(d.round), report.expert_names[i],
                                  csv::format_double(d.weights_used[i]),
                                  csv::format_double(d.losses.expert_raw[i]),
                                  csv::format_double(d.losses.expert_scaled[i])});
        csv::write_file(path("weights.csv"), t);
    }

    {
        csv::Table t;
        t.header = {"round", "forecaster_loss", "regret"};
        for (std::size_t k = 0; k < report.days.size(); ++k)
            t.rows.push_back({std::to_string(report.days[k].round),
                              csv::format_double(report.days[k].losses.forecaster_raw),
                              csv::format_double(report.regret_curve[k])});
        csv::write_file(path("regret.csv"), t);
    }

    {
        csv::Table t;
        t.header = {"date", "hour", "forecast_kw"};
        for (const PeakFlag& f : report.peak_flags)
            t.rows.push_back({to_iso_date(f.day_start), std::to_string(f.hour),
                              csv::format_double(f.forecast_kw)});
        csv::write_file(path("flags.csv"), t);
    }

    {
        csv::Table t;
        t.header = {"date", "reason"};
        for (const SkippedDay& s : report.skipped)
            t.rows.push_back({to_iso_date(s.day_start), s.reason});
        csv::write_file(path("skipped.csv"), t);
    }
}

DailyCsv load_daily_csv(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    DailyCsv out;
    constexpr std::size_t fixed = 3 + 24 + 24 + 1;
    if (t.header.size() < fixed)
        throw ParseError("daily.csv: unexpected column count");
    for (std::size_t c = fixed; c < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        if (h.rfind("mape_", 0) != 0)
            throw ParseError("daily.csv: unexpected column '" + h + "'");
        out.expert_names.push_back(h.substr(5));
    }
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size())
            throw ParseError("daily.csv: ragged row");
        DayRecord d;
        d.day_start = parse_iso_hour(row[1]);
        d.round = static_cast<int>(csv::parse_double(row[2]));
        for (int h = 0; h < 24; ++h) {
            d.actual[static_cast<std::size_t>(h)] =
                csv::parse_double(row[3 + static_cast<std::size_t>(h)]);
            d.forecast[static_cast<std::size_t>(h)] =
                csv::parse_double(row[27 + static_cast<std::size_t>(h)]);
        }
        d.losses.round = d.round;
        d.losses.forecaster_raw = csv::parse_double(row[51]);
        d.losses.forecaster_scaled = scale_loss(d.losses.forecaster_raw);
        for (std::size_t i = 0; i < out.expert_names.size(); ++i) {
            const double raw = csv::parse_double(row[fixed + i]);
            d.losses.expert_raw.push_back(raw);
            d.losses.expert_scaled.push_back(scale_loss(raw));
        }
        out.days.push_back(std::move(d));
    }
    return out;
}

} // namespace dhf
