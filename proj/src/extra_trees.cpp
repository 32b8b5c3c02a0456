#include "dhf/extra_trees.hpp"

#include <algorithm>
#include <cmath>

#include "dhf/errors.hpp"
#include "dhf/parallel.hpp"
#include "dhf/rng.hpp"

namespace dhf {

void EtrParams::validate(std::size_t n_features) const {
    if (n_trees < 1) throw InvalidSpecError("extra trees: n_trees must be >= 1");
    if (min_leaf < 1) throw InvalidSpecError("extra trees: min_leaf must be >= 1");
    if (min_split < 0) throw InvalidSpecError("extra trees: min_split must be >= 0");
    if (k_features < 0 || k_features > static_cast<int>(n_features))
        throw InvalidSpecError("extra trees: k_features out of range");
}

double Tree::predict_row(const double* row) const {
    int idx = 0;
    for (;;) {
        const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
        if (node.feature < 0) return node.value;
        idx = row[node.feature] < node.threshold ? node.left : node.right;
    }
}

double ExtraTreesModel::predict_row(const double* row) const {
    double sum = 0.0;
    for (const Tree& t : trees) sum += t.predict_row(row);
    return sum / static_cast<double>(trees.size());
}

namespace {

struct TreeBuilder {
    const Matrix& x;
    const std::vector<double>& y;
    int min_leaf;
    int min_split;
    int k_features;
    Rng rng;
    Tree tree;
    std::vector<int> rows;    // permuted in place as nodes split
    std::vector<int> scratch; // stable-partition buffer

    TreeBuilder(const Matrix& x_, const std::vector<double>& y_, const EtrParams& p,
                std::uint64_t tree_seed)
        : x(x_), y(y_), min_leaf(p.min_leaf),
          min_split(p.min_split > 0 ? p.min_split : static_cast<int>(x_.cols()) + 1),
          k_features(p.k_features > 0 ? p.k_features : static_cast<int>(x_.cols())),
          rng(tree_seed) {
        rows.resize(x.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
        scratch.resize(rows.size());
    }

    double mean_of(int begin, int end) const {
        double s = 0.0;
        for (int i = begin; i < end; ++i) s += y[static_cast<std::size_t>(rows[i])];
        return s / static_cast<double>(end - begin);
    }

    // sum of squared deviations from the mean
    double sse_of(int begin, int end, double mean) const {
        double s = 0.0;
        for (int i = begin; i < end; ++i) {
            const double d = y[static_cast<std::size_t>(rows[i])] - mean;
            s += d * d;
        }
        return s;
    }

    int build(int begin, int end) {
        const int n = end - begin;
        const double mean = mean_of(begin, end);
        const double sse = sse_of(begin, end, mean);

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, mean});

        if (n < min_split || n < 2 * min_leaf || sse <= 0.0) return node_index;

        int best_feature = -1;
        double best_cut = 0.0;
        double best_score = 0.0;

        for (int f = 0; f < k_features; ++f) {
            double lo = x(static_cast<std::size_t>(rows[begin]), static_cast<std::size_t>(f));
            double hi = lo;
            for (int i = begin + 1; i < end; ++i) {
                const double v = x(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(f));
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (lo >= hi) continue; // constant feature here, no draw

            const double cut = rng.uniform(lo, hi);

            int n_left = 0;
            double sum_left = 0.0;
            for (int i = begin; i < end; ++i) {
                if (x(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(f)) < cut) {
                    ++n_left;
                    sum_left += y[static_cast<std::size_t>(rows[i])];
                }
            }
            const int n_right = n - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;

            const double mean_left = sum_left / n_left;
            const double mean_right = (mean * n - sum_left) / n_right;
            double sse_children = 0.0;
            for (int i = begin; i < end; ++i) {
                const double yi = y[static_cast<std::size_t>(rows[i])];
                const double c =
                    x(static_cast<std::size_t>(rows[i]), static_cast<std::size_t>(f)) < cut
                        ? mean_left
                        : mean_right;
                sse_children += (yi - c) * (yi - c);
            }
            const double score = sse - sse_children;
            if (best_feature < 0 || score > best_score) {
                best_feature = f;
                best_cut = cut;
                best_score = score;
            }
        }

        if (best_feature < 0) return node_index;

        // stable partition: both children keep the rows' relative order
        int n_left = 0;
        int n_right = 0;
        for (int i = begin; i < end; ++i) {
            const int r = rows[i];
            if (x(static_cast<std::size_t>(r), static_cast<std::size_t>(best_feature)) < best_cut)
                rows[begin + n_left++] = r;
            else
                scratch[static_cast<std::size_t>(n_right++)] = r;
        }
        for (int i = 0; i < n_right; ++i) rows[begin + n_left + i] = scratch[static_cast<std::size_t>(i)];

        tree.nodes[static_cast<std::size_t>(node_index)].feature = best_feature;
        tree.nodes[static_cast<std::size_t>(node_index)].threshold = best_cut;
        const int left = build(begin, begin + n_left);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left;
        const int right = build(begin + n_left, end);
        tree.nodes[static_cast<std::size_t>(node_index)].right = right;
        return node_index;
    }
};

} // namespace

ExtraTreesModel fit_extra_trees(const Matrix& x, const std::vector<double>& y,
                                const EtrParams& params, std::uint64_t seed, int jobs) {
    if (x.rows() == 0) throw InvalidSpecError("extra trees: empty training set");
    if (x.rows() != y.size())
        throw LengthMismatchError("extra trees: rows vs targets");
    params.validate(x.cols());

    ExtraTreesModel model;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    par::for_each_index(model.trees.size(), jobs, [&](std::size_t t) {
        TreeBuilder builder(x, y, params, mix_seed(seed, t));
        builder.build(0, static_cast<int>(x.rows()));
        model.trees[t] = std::move(builder.tree);
    });
    return model;
}

std::vector<double> forest_predict_serial(const ExtraTreesModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = model.predict_row(x.row(r));
    return out;
}

std::vector<double> forest_predict(const ExtraTreesModel& model, const Matrix& x,
                                   int jobs) {
    if (par::resolve_jobs(jobs) <= 1) return forest_predict_serial(model, x);
    std::vector<double> out(x.rows());
    par::for_each_index_parallel(x.rows(), jobs,
                                 [&](std::size_t r) { out[r] = model.predict_row(x.row(r)); });
    return out;
}

} // namespace dhf
