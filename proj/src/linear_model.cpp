#include "dhf/linear_model.hpp"

#include "dhf/errors.hpp"

namespace dhf {

double LinearModel::predict_row(const double* row) const {
    double v = intercept;
    for (std::size_t c = 0; c < coef.size(); ++c) v += coef[c] * row[c];
    return v;
}

LinearModel fit_linear(const Matrix& x, const std::vector<double>& y) {
    if (x.rows() != y.size()) throw LengthMismatchError("fit_linear: rows vs targets");
    if (x.rows() <= x.cols())
        throw InvalidSpecError("fit_linear: need more rows than features");

    Matrix design(x.rows(), x.cols() + 1);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        design(r, 0) = 1.0;
        for (std::size_t c = 0; c < x.cols(); ++c) design(r, c + 1) = x(r, c);
    }
    const std::vector<double> beta = solve_least_squares(std::move(design), y);

    LinearModel model;
    model.intercept = beta[0];
    model.coef.assign(beta.begin() + 1, beta.end());
    return model;
}

} // namespace dhf
