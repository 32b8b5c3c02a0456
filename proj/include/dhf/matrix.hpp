#pragma once

#include <cstddef>
#include <vector>

namespace dhf {

// Dense row-major matrix of doubles; just enough linear algebra for the
// regression experts.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix from_rows(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    double* row(std::size_t r) { return a_.data() + r * cols_; }
    const double* row(std::size_t r) const { return a_.data() + r * cols_; }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

// Minimum-residual solution of A x = b via Householder QR. Requires
// rows >= cols; throws SingularError when A is rank deficient.
std::vector<double> solve_least_squares(Matrix a, std::vector<double> b);

} // namespace dhf
