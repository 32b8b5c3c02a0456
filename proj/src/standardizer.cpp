#include "dhf/standardizer.hpp"

#include <cmath>

#include "dhf/errors.hpp"

namespace dhf {

Standardizer Standardizer::fit(const Matrix& x) {
    if (x.rows() == 0) throw InvalidSpecError("standardizer: no training rows");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    for (std::size_t c = 0; c < d; ++c) {
        double m = 0.0;
        for (std::size_t r = 0; r < n; ++r) m += x(r, c);
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dv = x(r, c) - m;
            var += dv * dv;
        }
        var /= static_cast<double>(n);
        s.mean[c] = m;
        s.scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != mean.size())
        throw LengthMismatchError("standardizer: column count mismatch");
    Matrix out = x;
    for (std::size_t r = 0; r < out.rows(); ++r) transform_row(out.row(r));
    return out;
}

void Standardizer::transform_row(double* row) const {
    for (std::size_t c = 0; c < mean.size(); ++c)
        row[c] = (row[c] - mean[c]) / scale[c];
}

TargetScaler TargetScaler::fit(const std::vector<double>& y) {
    if (y.empty()) throw InvalidSpecError("target scaler: no targets");
    TargetScaler t;
    double m = 0.0;
    for (double v : y) m += v;
    m /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - m) * (v - m);
    var /= static_cast<double>(y.size());
    t.mean = m;
    t.scale = var > 0.0 ? std::sqrt(var) : 1.0;
    return t;
}

std::vector<double> TargetScaler::standardize(const std::vector<double>& y) const {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = (y[i] - mean) / scale;
    return out;
}

} // namespace dhf
