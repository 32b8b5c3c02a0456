#include "dhf/grid_search.hpp"

#include <cmath>
#include <limits>

#include "dhf/errors.hpp"
#include "dhf/rng.hpp"

namespace dhf {

ExpertParams apply_param(ExpertFamily family, ExpertParams params,
                         const std::string& name, double value) {
    switch (family) {
        case ExpertFamily::LinearRegression:
            throw InvalidSpecError("linear regression has no tunable parameter '" + name + "'");
        case ExpertFamily::ExtraTrees: {
            auto& p = std::get<EtrParams>(params);
            if (name == "n_trees") p.n_trees = static_cast<int>(value);
            else if (name == "min_leaf") p.min_leaf = static_cast<int>(value);
            else if (name == "min_split") p.min_split = static_cast<int>(value);
            else if (name == "k_features") p.k_features = static_cast<int>(value);
            else throw InvalidSpecError("extra trees: unknown parameter '" + name + "'");
            break;
        }
        case ExpertFamily::NeuralNet: {
            auto& p = std::get<MlpParams>(params);
            if (name == "epochs") p.epochs = static_cast<int>(value);
            else if (name == "batch") p.batch = static_cast<int>(value);
            else if (name == "learning_rate") p.learning_rate = value;
            else throw InvalidSpecError("mlp: unknown parameter '" + name + "'");
            break;
        }
        case ExpertFamily::SupportVector: {
            auto& p = std::get<SvrParams>(params);
            if (name == "c") p.c = value;
            else if (name == "gamma") p.gamma = value;
            else if (name == "epsilon") p.epsilon = value;
            else if (name == "tol") p.tol = value;
            else if (name == "max_passes") p.max_passes = static_cast<long long>(value);
            else throw InvalidSpecError("svr: unknown parameter '" + name + "'");
            break;
        }
    }
    return params;
}

namespace {

std::vector<GridPoint> enumerate(const ParamGrid& grid) {
    std::vector<GridPoint> points;
    points.emplace_back();
    for (const auto& [name, values] : grid.axes) {
        std::vector<GridPoint> expanded;
        expanded.reserve(points.size() * values.size());
        for (const GridPoint& base : points) {
            for (double v : values) {
                GridPoint p = base;
                p.values.emplace_back(name, v);
                expanded.push_back(std::move(p));
            }
        }
        points.swap(expanded);
    }
    return points;
}

FeatureMatrix take_rows(const FeatureMatrix& m, std::size_t begin, std::size_t end) {
    FeatureMatrix out;
    out.kind = m.kind;
    out.stamps.assign(m.stamps.begin() + static_cast<std::ptrdiff_t>(begin),
                      m.stamps.begin() + static_cast<std::ptrdiff_t>(end));
    out.x.assign(m.x.begin() + static_cast<std::ptrdiff_t>(begin * m.cols()),
                 m.x.begin() + static_cast<std::ptrdiff_t>(end * m.cols()));
    out.targets.assign(m.targets.begin() + static_cast<std::ptrdiff_t>(begin),
                       m.targets.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

FeatureMatrix concat_rows(const FeatureMatrix& a, const FeatureMatrix& b) {
    FeatureMatrix out = a;
    out.stamps.insert(out.stamps.end(), b.stamps.begin(), b.stamps.end());
    out.x.insert(out.x.end(), b.x.begin(), b.x.end());
    out.targets.insert(out.targets.end(), b.targets.begin(), b.targets.end());
    return out;
}

} // namespace

GridSearchResult grid_search_cv(ExpertFamily family, FeatureSetKind kind,
                                const ExpertParams& base_params, const ParamGrid& grid,
                                const FeatureMatrix& train, int folds,
                                std::uint64_t seed, int jobs) {
    if (grid.axes.empty() && grid.size() != 1)
        throw InvalidSpecError("grid search: empty grid");
    if (folds < 2) throw InvalidSpecError("grid search: folds must be >= 2");
    if (!train.has_targets())
        throw InvalidSpecError("grid search: training matrix lacks targets");
    const std::size_t n = train.rows();
    if (n < static_cast<std::size_t>(folds))
        throw InvalidSpecError("grid search: fewer rows than folds");

    GridSearchResult result;
    result.folds = folds;
    result.points = enumerate(grid);
    result.cv_scores.assign(result.points.size(), 0.0);

    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t pi = 0; pi < result.points.size(); ++pi) {
        ExpertParams params = base_params;
        for (const auto& [name, value] : result.points[pi].values)
            params = apply_param(family, std::move(params), name, value);

        double mean_loss = 0.0;
        bool failed = false;
        for (int f = 0; f < folds && !failed; ++f) {
            const std::size_t lo = n * static_cast<std::size_t>(f) /
                                   static_cast<std::size_t>(folds);
            const std::size_t hi = n * static_cast<std::size_t>(f + 1) /
                                   static_cast<std::size_t>(folds);
            const FeatureMatrix validation = take_rows(train, lo, hi);
            const FeatureMatrix fit_set =
                concat_rows(take_rows(train, 0, lo), take_rows(train, hi, n));
            if (validation.rows() == 0 || fit_set.rows() == 0) {
                failed = true;
                break;
            }

            ExpertSpec spec;
            spec.name = to_string(family) + "_cv";
            spec.family = family;
            spec.feature_kind = kind;
            spec.params = params;
            spec.rng_seed = mix_seed(seed, pi * 131 + static_cast<std::size_t>(f));
            try {
                const ExpertModel model = fit(spec, fit_set, jobs);
                const std::vector<double> pred = model.predict(validation, jobs);
                double mse = 0.0;
                for (std::size_t r = 0; r < pred.size(); ++r) {
                    const double d = pred[r] - validation.targets[r];
                    mse += d * d;
                }
                mean_loss += mse / static_cast<double>(pred.size());
            } catch (const Error&) {
                failed = true;
            }
        }
        result.cv_scores[pi] = failed ? std::numeric_limits<double>::infinity()
                                      : mean_loss / static_cast<double>(folds);
        if (result.cv_scores[pi] < best_score) {
            best_score = result.cv_scores[pi];
            result.best_index = pi;
        }
    }
    result.best_params = result.points[result.best_index];
    return result;
}

csv::Table grid_results_table(const GridSearchResult& result) {
    csv::Table t;
    if (!result.points.empty())
        for (const auto& [name, value] : result.points.front().values)
            t.header.push_back(name);
    t.header.push_back("mean_score");
    for (std::size_t pi = 0; pi < result.points.size(); ++pi) {
        std::vector<std::string> row;
        for (const auto& [name, value] : result.points[pi].values)
            row.push_back(csv::format_double(value));
        row.push_back(csv::format_double(result.cv_scores[pi]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace dhf
