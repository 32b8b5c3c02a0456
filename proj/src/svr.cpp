#include "dhf/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "dhf/errors.hpp"
#include "dhf/parallel.hpp"

namespace dhf {

void SvrParams::validate() const {
    if (!(c > 0.0)) throw InvalidSpecError("svr: C must be > 0");
    if (!(gamma > 0.0)) throw InvalidSpecError("svr: gamma must be > 0");
    if (!(epsilon >= 0.0)) throw InvalidSpecError("svr: epsilon must be >= 0");
    if (!(tol > 0.0)) throw InvalidSpecError("svr: tol must be > 0");
    if (max_passes < 1) throw InvalidSpecError("svr: max_passes must be >= 1");
    if (cache_mb < 0.0) throw InvalidSpecError("svr: cache_mb must be >= 0");
}

void rbf_kernel_row_serial(const Matrix& x, double gamma, std::size_t base, double* out) {
    const double* u = x.row(base);
    const std::size_t d = x.cols();
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double* v = x.row(r);
        double dist2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = u[c] - v[c];
            dist2 += diff * diff;
        }
        out[r] = std::exp(-gamma * dist2);
    }
}

void rbf_kernel_row(const Matrix& x, double gamma, std::size_t base, double* out,
                    int jobs) {
    if (par::resolve_jobs(jobs) <= 1) {
        rbf_kernel_row_serial(x, gamma, base, out);
        return;
    }
    const double* u = x.row(base);
    const std::size_t d = x.cols();
    par::for_each_index_parallel(x.rows(), jobs, [&](std::size_t r) {
        const double* v = x.row(r);
        double dist2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = u[c] - v[c];
            dist2 += diff * diff;
        }
        out[r] = std::exp(-gamma * dist2);
    });
}

namespace {

// LRU cache of kernel rows; eviction order depends only on the (serial)
// sequence of requests, so caching never affects results.
class KernelCache {
public:
    KernelCache(const Matrix& x, double gamma, double budget_mb, int jobs)
        : x_(x), gamma_(gamma), jobs_(jobs) {
        const std::size_t n = x.rows();
        const std::size_t row_bytes = n * sizeof(double);
        std::size_t budget_bytes;
        if (budget_mb <= 0.0) {
            // auto: whole matrix if it fits in a conservative default
            const std::size_t cap = 1536ull * 1024 * 1024;
            budget_bytes = std::min(n * row_bytes, cap);
        } else {
            budget_bytes = static_cast<std::size_t>(budget_mb * 1024.0 * 1024.0);
        }
        max_rows_ = std::max<std::size_t>(2, budget_bytes / std::max<std::size_t>(1, row_bytes));
        max_rows_ = std::min(max_rows_, n);
    }

    const double* row(std::size_t base) {
        auto it = slots_.find(base);
        if (it != slots_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.lru_it);
            return it->second.values.data();
        }
        if (slots_.size() >= max_rows_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            auto vit = slots_.find(victim);
            spare_ = std::move(vit->second.values);
            slots_.erase(vit);
        }
        Entry entry;
        entry.values = std::move(spare_);
        entry.values.resize(x_.rows());
        rbf_kernel_row(x_, gamma_, base, entry.values.data(), effective_jobs());
        lru_.push_front(base);
        entry.lru_it = lru_.begin();
        auto [pos, inserted] = slots_.emplace(base, std::move(entry));
        (void)inserted;
        return pos->second.values.data();
    }

private:
    int effective_jobs() const { return x_.rows() >= 512 ? jobs_ : 1; }

    struct Entry {
        std::vector<double> values;
        std::list<std::size_t>::iterator lru_it;
    };

    const Matrix& x_;
    double gamma_;
    int jobs_;
    std::size_t max_rows_ = 2;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t, Entry> slots_;
    std::vector<double> spare_;
};

struct Candidate {
    double value = 0.0;
    std::size_t base = 0;
    bool star = false; // alpha* side
    bool valid = false;
};

} // namespace

SvrModel fit_svr(const Matrix& x, const std::vector<double>& y, const SvrParams& params,
                 int jobs, SvrFitInfo* info) {
    params.validate();
    const std::size_t n = x.rows();
    if (n == 0) throw InvalidSpecError("svr: empty training set");
    if (n != y.size()) throw LengthMismatchError("svr: rows vs targets");

    const double C = params.c;
    const double eps = params.epsilon;
    constexpr double kTau = 1e-12;

    std::vector<double> alpha(n, 0.0), alpha_star(n, 0.0);
    std::vector<double> g(n, 0.0); // (K beta)_b

    KernelCache cache(x, params.gamma, params.cache_mb, jobs);
    const int gradient_jobs = n >= 512 ? jobs : 1;

    const long long max_iterations =
        params.max_passes * static_cast<long long>(std::max<std::size_t>(n, 1));

    long long iteration = 0;
    double violation = 0.0;
    for (;; ++iteration) {
        // maximal up candidate and minimal low candidate (KKT bounds);
        // alpha side value: y - g - eps, alpha* side value: y - g + eps
        Candidate up, low;
        for (std::size_t b = 0; b < n; ++b) {
            const double v_plus = y[b] - g[b] - eps;
            const double v_minus = v_plus + 2.0 * eps;
            if (alpha[b] < C && (!up.valid || v_plus > up.value))
                up = {v_plus, b, false, true};
            if (alpha_star[b] > 0.0 && (!up.valid || v_minus > up.value))
                up = {v_minus, b, true, true};
            if (alpha[b] > 0.0 && (!low.valid || v_plus < low.value))
                low = {v_plus, b, false, true};
            if (alpha_star[b] < C && (!low.valid || v_minus < low.value))
                low = {v_minus, b, true, true};
        }
        if (!up.valid || !low.valid) {
            violation = 0.0;
            break;
        }
        violation = up.value - low.value;
        if (violation <= params.tol) break;
        if (iteration >= max_iterations)
            throw NonConvergenceError(
                "svr: SMO exceeded " + std::to_string(params.max_passes) +
                " passes (violation " + std::to_string(violation) + ")");

        const double* krow_i = cache.row(up.base);

        // second-order choice of the partner index
        Candidate best_j;
        double best_gain = -1.0;
        for (std::size_t b = 0; b < n; ++b) {
            const double v_plus = y[b] - g[b] - eps;
            const double v_minus = v_plus + 2.0 * eps;
            if (alpha[b] > 0.0 && v_plus < up.value) {
                const double diff = up.value - v_plus;
                const double a = std::max(2.0 - 2.0 * krow_i[b], kTau);
                const double gain = diff * diff / a;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_j = {v_plus, b, false, true};
                }
            }
            if (alpha_star[b] < C && v_minus < up.value) {
                const double diff = up.value - v_minus;
                const double a = std::max(2.0 - 2.0 * krow_i[b], kTau);
                const double gain = diff * diff / a;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_j = {v_minus, b, true, true};
                }
            }
        }
        if (!best_j.valid) break; // nothing improvable beyond tol

        const double a =
            std::max(2.0 - 2.0 * krow_i[best_j.base], kTau);
        double delta = (up.value - best_j.value) / a;

        // box caps: the up index moves toward its bound headroom, the low
        // index away from its current mass
        const double cap_i = up.star ? alpha_star[up.base] : C - alpha[up.base];
        const double cap_j = best_j.star ? C - alpha_star[best_j.base] : alpha[best_j.base];
        delta = std::min(delta, std::min(cap_i, cap_j));
        if (delta <= 0.0) break; // numerically stuck at a bound

        if (up.star)
            alpha_star[up.base] -= delta;
        else
            alpha[up.base] += delta;
        if (best_j.star)
            alpha_star[best_j.base] += delta;
        else
            alpha[best_j.base] -= delta;

        // beta_{bi} += delta, beta_{bj} -= delta => rank-two gradient update
        const double* krow_j = cache.row(best_j.base);
        par::for_each_index(n, gradient_jobs, [&](std::size_t b) {
            g[b] += delta * (krow_i[b] - krow_j[b]);
        });
    }

    // bias from the final KKT interval
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n; ++b) {
        const double v_plus = y[b] - g[b] - eps;
        const double v_minus = v_plus + 2.0 * eps;
        if (alpha[b] < C) m_up = std::max(m_up, v_plus);
        if (alpha_star[b] > 0.0) m_up = std::max(m_up, v_minus);
        if (alpha[b] > 0.0) m_low = std::min(m_low, v_plus);
        if (alpha_star[b] < C) m_low = std::min(m_low, v_minus);
    }
    const double bias = 0.5 * (m_up + m_low);

    SvrModel model;
    model.gamma = params.gamma;
    model.bias = bias;
    std::vector<double> beta_full(n, 0.0);
    std::size_t n_sv = 0;
    for (std::size_t b = 0; b < n; ++b) {
        beta_full[b] = alpha[b] - alpha_star[b];
        if (beta_full[b] != 0.0) ++n_sv;
    }
    model.support = Matrix(n_sv, x.cols());
    model.beta.reserve(n_sv);
    std::size_t slot = 0;
    for (std::size_t b = 0; b < n; ++b) {
        if (beta_full[b] == 0.0) continue;
        for (std::size_t c = 0; c < x.cols(); ++c) model.support(slot, c) = x(b, c);
        model.beta.push_back(beta_full[b]);
        ++slot;
    }

    if (info) {
        info->iterations = iteration;
        info->final_violation = violation;
        info->beta_full = std::move(beta_full);
    }
    return model;
}

double SvrModel::predict_row(const double* row) const {
    const std::size_t d = support.cols();
    double sum = bias;
    for (std::size_t s = 0; s < beta.size(); ++s) {
        const double* u = support.row(s);
        double dist2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = u[c] - row[c];
            dist2 += diff * diff;
        }
        sum += beta[s] * std::exp(-gamma * dist2);
    }
    return sum;
}

std::vector<double> svr_predict_serial(const SvrModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = model.predict_row(x.row(r));
    return out;
}

std::vector<double> svr_predict(const SvrModel& model, const Matrix& x, int jobs) {
    if (par::resolve_jobs(jobs) <= 1) return svr_predict_serial(model, x);
    std::vector<double> out(x.rows());
    par::for_each_index_parallel(x.rows(), jobs,
                                 [&](std::size_t r) { out[r] = model.predict_row(x.row(r)); });
    return out;
}

} // namespace dhf
