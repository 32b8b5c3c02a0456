#pragma once

#include <vector>

#include "dhf/matrix.hpp"

namespace dhf {

// Ordinary least squares with intercept, solved by Householder QR.
struct LinearModel {
    double intercept = 0.0;
    std::vector<double> coef;

    double predict_row(const double* row) const;
};

// Throws SingularError when the design matrix (with intercept column) is
// rank deficient.
LinearModel fit_linear(const Matrix& x, const std::vector<double>& y);

} // namespace dhf
