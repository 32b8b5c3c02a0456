#pragma once

#include <vector>

#include "dhf/matrix.hpp"

namespace dhf {

// Per-feature zero-mean / unit-variance scaling learned on training rows.
// Constant columns keep scale 1 so they pass through unchanged.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);

    Matrix transform(const Matrix& x) const;
    void transform_row(double* row) const;
};

struct TargetScaler {
    double mean = 0.0;
    double scale = 1.0;

    static TargetScaler fit(const std::vector<double>& y);

    std::vector<double> standardize(const std::vector<double>& y) const;
    double destandardize(double v) const { return v * scale + mean; }
};

} // namespace dhf
