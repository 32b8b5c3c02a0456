#pragma once

#include <cstdint>
#include <vector>

#include "dhf/matrix.hpp"

namespace dhf {

struct SvrParams {
    double c = 1000.0;
    double gamma = 1e-5;
    double epsilon = 0.01; // in standardized target units
    double tol = 1e-3;     // KKT violation tolerance
    // One pass is n pair updates; the solver throws NonConvergenceError when
    // max_passes is exhausted before the violation drops below tol.
    long long max_passes = 100000;
    double cache_mb = 0.0; // kernel row cache budget; 0 = auto

    void validate() const; // throws InvalidSpecError
};

// eps-SVR with RBF kernel in dual form: f(x) = sum_i beta_i K(x_i, x) + b,
// K(u,v) = exp(-gamma ||u-v||^2), |beta_i| <= C, sum_i beta_i = 0.
struct SvrModel {
    Matrix support;            // n_sv x d, standardized feature rows
    std::vector<double> beta;  // n_sv, nonzero dual coefficients
    double bias = 0.0;
    double gamma = 1e-5;

    double predict_row(const double* row) const;
};

struct SvrFitInfo {
    long long iterations = 0;
    double final_violation = 0.0;
    // full dual vector (including zeros), for feasibility checks in tests
    std::vector<double> beta_full;
};

// Solves the eps-insensitive dual by sequential pairwise (SMO-style)
// optimization with second-order working-set selection and an LRU kernel-row
// cache. Deterministic for fixed inputs regardless of thread count.
SvrModel fit_svr(const Matrix& x, const std::vector<double>& y, const SvrParams& params,
                 int jobs = 1, SvrFitInfo* info = nullptr);

// One RBF kernel row K(base, .) against every row of x; serial reference and
// OpenMP paths produce identical bits.
void rbf_kernel_row_serial(const Matrix& x, double gamma, std::size_t base, double* out);
void rbf_kernel_row(const Matrix& x, double gamma, std::size_t base, double* out,
                    int jobs);

std::vector<double> svr_predict(const SvrModel& model, const Matrix& x, int jobs = 1);
std::vector<double> svr_predict_serial(const SvrModel& model, const Matrix& x);

} // namespace dhf
