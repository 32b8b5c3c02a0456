#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dhf/csv.hpp"
#include "dhf/expert.hpp"

namespace dhf {

// Exhaustive grid over named hyper-parameters. Axes keep their declared
// order; enumeration varies the last axis fastest, and ties on the mean
// validation loss go to the earlier grid point.
struct ParamGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& [name, values] : axes) n *= values.size();
        return n;
    }
};

struct GridPoint {
    std::vector<std::pair<std::string, double>> values;
};

struct GridSearchResult {
    GridPoint best_params;
    std::size_t best_index = 0;
    std::vector<GridPoint> points;  // grid order
    std::vector<double> cv_scores;  // mean validation MSE; +inf for failed fits
    int folds = 0;
};

// Applies a named value to family params; throws InvalidSpecError for
// unknown names.
ExpertParams apply_param(ExpertFamily family, ExpertParams params,
                         const std::string& name, double value);

// K-fold cross-validation with contiguous time-ordered blocks (no shuffle,
// so lag features cannot leak across the fold boundary by reordering).
// Fit errors are recorded as +inf scores rather than thrown.
GridSearchResult grid_search_cv(ExpertFamily family, FeatureSetKind kind,
                                const ExpertParams& base_params, const ParamGrid& grid,
                                const FeatureMatrix& train, int folds = 5,
                                std::uint64_t seed = 0, int jobs = 1);

// param columns + mean_score, in grid order
csv::Table grid_results_table(const GridSearchResult& result);

} // namespace dhf
