#include <cmath>

#include "dhf/errors.hpp"
#include "dhf/expert.hpp"
#include "dhf/rng.hpp"

namespace dhf {

std::string to_string(ExpertFamily family) {
    switch (family) {
        case ExpertFamily::LinearRegression: return "lr";
        case ExpertFamily::ExtraTrees: return "etr";
        case ExpertFamily::NeuralNet: return "ann";
        case ExpertFamily::SupportVector: return "svm";
    }
    throw InvalidSpecError("unknown expert family");
}

ExpertFamily expert_family_from_string(const std::string& s) {
    if (s == "lr") return ExpertFamily::LinearRegression;
    if (s == "etr") return ExpertFamily::ExtraTrees;
    if (s == "ann") return ExpertFamily::NeuralNet;
    if (s == "svm") return ExpertFamily::SupportVector;
    throw InvalidSpecError("unknown expert family '" + s + "'");
}

void ExpertSpec::validate() const {
    const int d = feature_count(feature_kind);
    switch (family) {
        case ExpertFamily::LinearRegression:
            if (!std::holds_alternative<LinearParams>(params))
                throw InvalidSpecError("expert '" + name + "': params/family mismatch");
            break;
        case ExpertFamily::ExtraTrees:
            if (const auto* p = std::get_if<EtrParams>(&params))
                p->validate(static_cast<std::size_t>(d));
            else
                throw InvalidSpecError("expert '" + name + "': params/family mismatch");
            break;
        case ExpertFamily::NeuralNet:
            if (const auto* p = std::get_if<MlpParams>(&params))
                p->validate();
            else
                throw InvalidSpecError("expert '" + name + "': params/family mismatch");
            break;
        case ExpertFamily::SupportVector:
            if (const auto* p = std::get_if<SvrParams>(&params))
                p->validate();
            else
                throw InvalidSpecError("expert '" + name + "': params/family mismatch");
            break;
    }
}

Matrix to_matrix(const FeatureMatrix& m) {
    return Matrix::from_rows(m.rows(), m.cols(), m.x);
}

ExpertModel fit(const ExpertSpec& spec, const FeatureMatrix& train, int jobs) {
    spec.validate();
    if (train.kind != spec.feature_kind)
        throw KindMismatchError("expert '" + spec.name + "': training matrix kind " +
                                to_string(train.kind) + " != " +
                                to_string(spec.feature_kind));
    if (!train.has_targets())
        throw InvalidSpecError("expert '" + spec.name + "': training matrix lacks targets");

    const Matrix x = to_matrix(train);
    ExpertModel model;
    model.spec = spec;

    switch (spec.family) {
        case ExpertFamily::LinearRegression:
            model.linear = fit_linear(x, train.targets);
            break;
        case ExpertFamily::ExtraTrees:
            model.forest = fit_extra_trees(x, train.targets, std::get<EtrParams>(spec.params),
                                           spec.rng_seed, jobs);
            break;
        case ExpertFamily::NeuralNet: {
            model.standardizer = Standardizer::fit(x);
            model.target_scaler = TargetScaler::fit(train.targets);
            const Matrix xs = model.standardizer->transform(x);
            const std::vector<double> ys = model.target_scaler->standardize(train.targets);
            model.mlp = fit_mlp(xs, ys, std::get<MlpParams>(spec.params), spec.rng_seed);
            break;
        }
        case ExpertFamily::SupportVector: {
            model.standardizer = Standardizer::fit(x);
            model.target_scaler = TargetScaler::fit(train.targets);
            const Matrix xs = model.standardizer->transform(x);
            const std::vector<double> ys = model.target_scaler->standardize(train.targets);
            model.svr = fit_svr(xs, ys, std::get<SvrParams>(spec.params), jobs);
            break;
        }
    }
    return model;
}

std::vector<double> ExpertModel::predict(const FeatureMatrix& inputs, int jobs) const {
    if (inputs.kind != spec.feature_kind)
        throw KindMismatchError("expert '" + spec.name + "': input kind " +
                                to_string(inputs.kind) + " != " +
                                to_string(spec.feature_kind));

    Matrix x = to_matrix(inputs);
    if (standardizer) x = standardizer->transform(x);

    std::vector<double> out;
    if (linear) {
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) out[r] = linear->predict_row(x.row(r));
    } else if (forest) {
        out = forest_predict(*forest, x, jobs);
    } else if (mlp) {
        out = mlp_predict(*mlp, x, jobs);
    } else if (svr) {
        out = svr_predict(*svr, x, jobs);
    } else {
        throw InvalidSpecError("expert '" + spec.name + "' has no fitted model");
    }

    for (double& v : out) {
        if (target_scaler) v = target_scaler->destandardize(v);
        if (!std::isfinite(v))
            throw NonFiniteError("expert '" + spec.name + "' produced a non-finite value");
        if (v < 0.0) v = 0.0; // thermal load is non-negative
    }
    return out;
}

std::vector<ExpertSpec> build_roster(std::uint64_t seed, const RosterDefaults& defaults) {
    struct Entry {
        const char* name;
        ExpertFamily family;
        FeatureSetKind kind;
    };
    // Table-2 combinations in fixed order
    const Entry entries[] = {
        {"lr_full", ExpertFamily::LinearRegression, FeatureSetKind::FullSet},
        {"ann_full", ExpertFamily::NeuralNet, FeatureSetKind::FullSet},
        {"ann_dt", ExpertFamily::NeuralNet, FeatureSetKind::SetMinusDT},
        {"svm_full", ExpertFamily::SupportVector, FeatureSetKind::FullSet},
        {"svm_dt", ExpertFamily::SupportVector, FeatureSetKind::SetMinusDT},
        {"etr_full", ExpertFamily::ExtraTrees, FeatureSetKind::FullSet},
        {"etr_dt", ExpertFamily::ExtraTrees, FeatureSetKind::SetMinusDT},
        {"etr_lags", ExpertFamily::ExtraTrees, FeatureSetKind::SetMinusLags},
    };

    std::vector<ExpertSpec> roster;
    std::uint64_t stream = 0;
    for (const Entry& e : entries) {
        ExpertSpec spec;
        spec.name = e.name;
        spec.family = e.family;
        spec.feature_kind = e.kind;
        spec.rng_seed = mix_seed(seed, ++stream);
        switch (e.family) {
            case ExpertFamily::LinearRegression: spec.params = LinearParams{}; break;
            case ExpertFamily::ExtraTrees: spec.params = defaults.etr; break;
            case ExpertFamily::NeuralNet: spec.params = defaults.mlp; break;
            case ExpertFamily::SupportVector: spec.params = defaults.svr; break;
        }
        spec.validate();
        roster.push_back(std::move(spec));
    }
    return roster;
}

} // namespace dhf
