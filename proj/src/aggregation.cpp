#include "dhf/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dhf/errors.hpp"

namespace dhf {

std::string to_string(AggregationRule rule) {
    switch (rule) {
        case AggregationRule::Ewa: return "ewa";
        case AggregationRule::FixedShare: return "fs";
        case AggregationRule::MlPoly: return "mlpoly";
    }
    throw InvalidSpecError("unknown aggregation rule");
}

AggregationRule aggregation_rule_from_string(const std::string& s) {
    if (s == "ewa") return AggregationRule::Ewa;
    if (s == "fs") return AggregationRule::FixedShare;
    if (s == "mlpoly") return AggregationRule::MlPoly;
    throw InvalidSpecError("unknown aggregation rule '" + s + "'");
}

void AggregatorConfig::validate() const {
    if (n_experts < 1) throw InvalidSpecError("aggregator: n_experts must be >= 1");
    // eta = 0 is legal and degenerates to the uniform average
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw InvalidSpecError("aggregator: eta must be finite and >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidSpecError("aggregator: alpha must lie in [0,1]");
    if (initial_weights) {
        if (initial_weights->size() != static_cast<std::size_t>(n_experts))
            throw InvalidSpecError("aggregator: initial_weights size mismatch");
        double sum = 0.0;
        for (double w : *initial_weights) {
            if (!(w >= 0.0)) throw InvalidSpecError("aggregator: negative initial weight");
            sum += w;
        }
        if (sum <= 0.0 || sum > 1.0 + 1e-12)
            throw InvalidSpecError("aggregator: initial weights must have 0 < sum <= 1");
    }
}

double scale_loss(double raw_mape) {
    if (!(raw_mape >= 0.0) || !std::isfinite(raw_mape))
        throw InvalidSpecError("loss must be finite and >= 0");
    return std::min(raw_mape / 100.0, 1.0);
}

AggregatorState make_state(const AggregatorConfig& config) {
    config.validate();
    const std::size_t n = static_cast<std::size_t>(config.n_experts);
    AggregatorState st;
    st.weights.assign(n, 1.0 / static_cast<double>(n));
    st.log_prior.assign(n, -std::log(static_cast<double>(n)));
    if (config.initial_weights) {
        double sum = 0.0;
        for (double w : *config.initial_weights) sum += w;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (*config.initial_weights)[i] / sum;
            st.weights[i] = w;
            st.log_prior[i] = w > 0.0 ? std::log(w)
                                      : -std::numeric_limits<double>::infinity();
        }
    }
    st.cumulative_scaled.assign(n, 0.0);
    st.cumulative_raw.assign(n, 0.0);
    st.mlpoly_regret.assign(n, 0.0);
    st.mlpoly_sq_regret.assign(n, 0.0);
    return st;
}

double mape(const std::array<double, 24>& actual, const std::array<double, 24>& forecast) {
    double sum = 0.0;
    for (std::size_t h = 0; h < 24; ++h) {
        if (actual[h] == 0.0)
            throw ZeroActualError("mape: actual value is zero at hour " + std::to_string(h));
        sum += std::abs(actual[h] - forecast[h]) / std::abs(actual[h]);
    }
    return 100.0 / 24.0 * sum;
}

double mape(const DailyBlock& actual, const DailyBlock& forecast) {
    return mape(actual.values, forecast.values);
}

std::array<double, 24> combine(const std::vector<double>& weights,
                               const std::vector<std::array<double, 24>>& advice) {
    if (weights.size() != advice.size())
        throw LengthMismatchError("combine: weights vs advice count");
    std::array<double, 24> out{};
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (std::size_t h = 0; h < 24; ++h) out[h] += weights[i] * advice[i][h];
    return out;
}

namespace {

void check_losses(const AggregatorState& state, const LossRecord& losses) {
    const std::size_t n = state.weights.size();
    if (losses.expert_scaled.size() != n)
        throw LengthMismatchError("loss record does not match expert count");
    for (double l : losses.expert_scaled)
        if (!(l >= 0.0) || !std::isfinite(l))
            throw InvalidSpecError("scaled losses must be finite and >= 0");
}

// exponents -> normalized weights via max-shift; all-(-inf) cannot happen
// because the max shifts the largest exponent to zero.
std::vector<double> softmax(const std::vector<double>& exponents) {
    const double shift = *std::max_element(exponents.begin(), exponents.end());
    std::vector<double> w(exponents.size());
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(exponents[i] - shift);
        z += w[i];
    }
    for (double& v : w) v /= z;
    return w;
}

} // namespace

void update_ewa(AggregatorState& state, const LossRecord& losses, double eta) {
    check_losses(state, losses);
    const std::size_t n = state.weights.size();
    // w_{i,t} ~ prior_i * exp(-eta * cumulative loss through the revealed round)
    std::vector<double> exponents(n);
    for (std::size_t i = 0; i < n; ++i)
        exponents[i] = state.log_prior[i] -
                       eta * (state.cumulative_scaled[i] + losses.expert_scaled[i]);
    state.weights = softmax(exponents);
}

void update_fixed_share(AggregatorState& state, const LossRecord& losses, double eta,
                        double alpha, bool paper_literal) {
    check_losses(state, losses);
    const std::size_t n = state.weights.size();
    std::vector<double> exponents(n);
    if (paper_literal) {
        // Printed form: the running weight w_{i,t-1} appears in the numerator
        // and, with the same index i, inside the denominator sum, so it
        // cancels and the loss update reduces to a softmax of the cumulative
        // loss without the prior.
        for (std::size_t i = 0; i < n; ++i)
            exponents[i] = -eta * (state.cumulative_scaled[i] + losses.expert_scaled[i]);
    } else {
        // Standard share update: previous weights decayed by the
        // just-revealed instantaneous loss.
        for (std::size_t i = 0; i < n; ++i)
            exponents[i] = (state.weights[i] > 0.0
                                ? std::log(state.weights[i])
                                : -std::numeric_limits<double>::infinity()) -
                           eta * losses.expert_scaled[i];
    }
    const std::vector<double> v = softmax(exponents);
    const double floor = alpha / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        state.weights[i] = floor + (1.0 - alpha) * v[i];
}

void update_mlpoly(AggregatorState& state, const LossRecord& losses) {
    check_losses(state, losses);
    const std::size_t n = state.weights.size();
    double truncated_sum = 0.0;
    std::vector<double> unnorm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double instant_regret =
            losses.forecaster_scaled - losses.expert_scaled[i];
        state.mlpoly_regret[i] += instant_regret;
        state.mlpoly_sq_regret[i] += instant_regret * instant_regret;
        const double rate = 1.0 / (1.0 + state.mlpoly_sq_regret[i]);
        unnorm[i] = rate * std::max(state.mlpoly_regret[i], 0.0);
        truncated_sum += unnorm[i];
    }
    if (truncated_sum <= 0.0) {
        std::fill(state.weights.begin(), state.weights.end(),
                  1.0 / static_cast<double>(n));
    } else {
        for (std::size_t i = 0; i < n; ++i) state.weights[i] = unnorm[i] / truncated_sum;
    }
}

void update(AggregatorState& state, const AggregatorConfig& config,
            const LossRecord& losses) {
    switch (config.rule) {
        case AggregationRule::Ewa:
            update_ewa(state, losses, config.eta);
            break;
        case AggregationRule::FixedShare:
            update_fixed_share(state, losses, config.eta, config.alpha,
                               config.paper_literal_fs);
            break;
        case AggregationRule::MlPoly:
            update_mlpoly(state, losses);
            break;
    }
    const std::size_t n = state.weights.size();
    for (std::size_t i = 0; i < n; ++i) {
        state.cumulative_scaled[i] += losses.expert_scaled[i];
        if (i < losses.expert_raw.size()) state.cumulative_raw[i] += losses.expert_raw[i];
    }
    state.forecaster_cumulative_scaled += losses.forecaster_scaled;
    state.forecaster_cumulative_raw += losses.forecaster_raw;
    ++state.round;
    state.regret_history.push_back(regret(state));
}

double regret(const AggregatorState& state) {
    const double best =
        *std::min_element(state.cumulative_scaled.begin(), state.cumulative_scaled.end());
    return state.forecaster_cumulative_scaled - best;
}

} // namespace dhf
