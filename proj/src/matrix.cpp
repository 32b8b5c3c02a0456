#include "dhf/matrix.hpp"

#include <cmath>

#include "dhf/errors.hpp"

namespace dhf {

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::vector<double> data) {
    if (data.size() != rows * cols)
        throw LengthMismatchError("matrix: data size does not match shape");
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.a_ = std::move(data);
    return m;
}

std::vector<double> solve_least_squares(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw LengthMismatchError("least squares: rhs length");
    if (m < n) throw SingularError("least squares: fewer rows than columns");

    // Householder QR (LINPACK convention), reflectors applied to b in step.
    std::vector<double> rdiag(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, a(i, k));
        if (norm != 0.0) {
            if (a(k, k) < 0.0) norm = -norm;
            for (std::size_t i = k; i < m; ++i) a(i, k) /= norm;
            a(k, k) += 1.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += a(i, k) * a(i, j);
                s = -s / a(k, k);
                for (std::size_t i = k; i < m; ++i) a(i, j) += s * a(i, k);
            }
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += a(i, k) * b[i];
            s = -s / a(k, k);
            for (std::size_t i = k; i < m; ++i) b[i] += s * a(i, k);
        }
        rdiag[k] = -norm;
    }

    double dmax = 0.0;
    for (double d : rdiag) dmax = std::max(dmax, std::abs(d));
    if (dmax == 0.0) throw SingularError("least squares: zero matrix");
    for (double d : rdiag)
        if (std::abs(d) < 1e-10 * dmax)
            throw SingularError("least squares: rank-deficient design matrix");

    // back substitution; R's diagonal lives in rdiag, the rest in a's upper part
    std::vector<double> x(n, 0.0);
    for (std::size_t kk = n; kk-- > 0;) {
        double s = b[kk];
        for (std::size_t j = kk + 1; j < n; ++j) s -= a(kk, j) * x[j];
        x[kk] = s / rdiag[kk];
    }
    return x;
}

} // namespace dhf
