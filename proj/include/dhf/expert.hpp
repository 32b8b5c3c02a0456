#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dhf/extra_trees.hpp"
#include "dhf/features.hpp"
#include "dhf/linear_model.hpp"
#include "dhf/matrix.hpp"
#include "dhf/mlp.hpp"
#include "dhf/standardizer.hpp"
#include "dhf/svr.hpp"

namespace dhf {

enum class ExpertFamily { LinearRegression, ExtraTrees, NeuralNet, SupportVector };

std::string to_string(ExpertFamily family);
ExpertFamily expert_family_from_string(const std::string& s);

struct LinearParams {};

using ExpertParams = std::variant<LinearParams, EtrParams, MlpParams, SvrParams>;

struct ExpertSpec {
    std::string name;
    ExpertFamily family = ExpertFamily::LinearRegression;
    FeatureSetKind feature_kind = FeatureSetKind::FullSet;
    ExpertParams params;
    std::uint64_t rng_seed = 0;

    void validate() const; // throws InvalidSpecError
};

// A fitted expert. The standardizer and target scaler are present for the
// NeuralNet and SupportVector families, which train in standardized space;
// LinearRegression and ExtraTrees operate on raw features. Immutable after
// fit; predict is re-entrant.
struct ExpertModel {
    ExpertSpec spec;
    std::optional<Standardizer> standardizer;
    std::optional<TargetScaler> target_scaler;

    std::optional<LinearModel> linear;
    std::optional<ExtraTreesModel> forest;
    std::optional<MlpModel> mlp;
    std::optional<SvrModel> svr;

    // One finite value per row, clamped below at 0 kW. Throws
    // KindMismatchError when inputs' kind differs from the spec's.
    std::vector<double> predict(const FeatureMatrix& inputs, int jobs = 1) const;
};

ExpertModel fit(const ExpertSpec& spec, const FeatureMatrix& train, int jobs = 1);

// Table-2 roster: LR-full, ANN-full, ANN-dt, SVM-full, SVM-dt, ETR-full,
// ETR-dt, ETR-lags (the -dt / -lags suffixes name the reduced feature sets).
struct RosterDefaults {
    EtrParams etr;
    MlpParams mlp;
    SvrParams svr;
};

std::vector<ExpertSpec> build_roster(std::uint64_t seed,
                                     const RosterDefaults& defaults = {});

Matrix to_matrix(const FeatureMatrix& m);

} // namespace dhf
