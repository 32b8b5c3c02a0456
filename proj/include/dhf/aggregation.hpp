#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dhf/hourly_series.hpp"

namespace dhf {

// Online aggregation of expert advice. Weights used to combine day k's
// forecasts are computed from losses revealed through day k-1; `update`
// ingests one revealed round and produces the weights for the next one.

enum class AggregationRule { Ewa, FixedShare, MlPoly };

std::string to_string(AggregationRule rule);
AggregationRule aggregation_rule_from_string(const std::string& s);

struct AggregatorConfig {
    AggregationRule rule = AggregationRule::FixedShare;
    double eta = 0.3;    // learning rate (EWA / FS)
    double alpha = 0.05; // FS mixing, in [0,1]
    int n_experts = 1;
    // Optional non-uniform prior; entries >= 0 with sum <= 1 (renormalized
    // internally). Uniform 1/N when omitted.
    std::optional<std::vector<double>> initial_weights;
    // Reproduces the printed form of the fixed-share loss update verbatim
    // (cumulative loss inside the exponent next to the running weight).
    bool paper_literal_fs = false;

    void validate() const; // throws InvalidSpecError
};

// Losses of one revealed round. Raw losses are daily MAPE percentages kept
// for reporting; scaled losses (raw/100 capped at 1) feed the weight updates
// so the exponential machinery sees a bounded loss.
struct LossRecord {
    int round = 0;
    std::vector<double> expert_raw;
    std::vector<double> expert_scaled;
    double forecaster_raw = 0.0;
    double forecaster_scaled = 0.0;
};

double scale_loss(double raw_mape);

struct AggregatorState {
    std::vector<double> weights;            // simplex; used for the next combine
    std::vector<double> log_prior;          // log of initial weights
    std::vector<double> cumulative_scaled;  // per-expert, non-decreasing
    std::vector<double> cumulative_raw;
    double forecaster_cumulative_scaled = 0.0;
    double forecaster_cumulative_raw = 0.0;
    int round = 0;                          // rounds ingested so far
    std::vector<double> regret_history;     // scaled-loss regret after each round

    // ML-Poly accumulators
    std::vector<double> mlpoly_regret;
    std::vector<double> mlpoly_sq_regret;
};

AggregatorState make_state(const AggregatorConfig& config);

// Mean absolute percentage error of a 24-hour block, Eq.-style:
// (100/24) * sum |A_h - F_h| / |A_h|. Throws ZeroActualError when any
// actual value is zero (such rounds are excluded from scoring upstream).
double mape(const std::array<double, 24>& actual,
            const std::array<double, 24>& forecast);
double mape(const DailyBlock& actual, const DailyBlock& forecast);

// Hour-wise convex combination of the experts' 24-hour blocks.
std::array<double, 24> combine(const std::vector<double>& weights,
                               const std::vector<std::array<double, 24>>& advice);

// One rule application each; `state` must have ingested rounds 1..k-1.
// All three preserve the simplex to ~1e-12 and never overflow (max-shift).
void update_ewa(AggregatorState& state, const LossRecord& losses, double eta);
void update_fixed_share(AggregatorState& state, const LossRecord& losses,
                        double eta, double alpha, bool paper_literal = false);
void update_mlpoly(AggregatorState& state, const LossRecord& losses);

// Dispatches on config.rule and advances the ledgers + regret history.
void update(AggregatorState& state, const AggregatorConfig& config,
            const LossRecord& losses);

// R_k = Lhat_k - min_i L_{i,k} on the scaled-loss ledger.
double regret(const AggregatorState& state);

} // namespace dhf
