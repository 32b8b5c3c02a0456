#pragma once

#include <cstdint>
#include <vector>

#include "dhf/matrix.hpp"

namespace dhf {

struct EtrParams {
    int n_trees = 100;
    int min_leaf = 7;
    // 0 means the extremely-randomized default of n_features + 1.
    int min_split = 0;
    // candidate features per split; 0 means all features.
    int k_features = 0;

    void validate(std::size_t n_features) const; // throws InvalidSpecError
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf mean (kept for internal nodes too)
};

struct Tree {
    std::vector<TreeNode> nodes; // root at index 0, preorder, left subtree first

    double predict_row(const double* row) const;
};

struct ExtraTreesModel {
    std::vector<Tree> trees;

    double predict_row(const double* row) const; // mean over trees, fixed order
};

// Extremely-randomized forest. Tree t draws from an independent stream seeded
// by mix_seed(seed, t); the draw protocol is fixed so a fitted forest is a
// pure function of (data, params, seed) regardless of thread count:
//   - nodes are built depth first, left child before right;
//   - a node becomes a leaf when it has fewer than min_split rows, fewer
//     than 2*min_leaf rows, or zero target variance;
//   - otherwise, for each candidate feature in index order whose node-local
//     range is non-degenerate, one uniform cut in (min, max) is drawn and
//     scored by variance reduction; cuts leaving a child below min_leaf are
//     drawn but discarded; the best-scoring valid cut wins, first feature on
//     ties; no valid cut means a leaf;
//   - partitions are stable: rows keep their relative order.
// Trees see the full sample (no bootstrap).
ExtraTreesModel fit_extra_trees(const Matrix& x, const std::vector<double>& y,
                                const EtrParams& params, std::uint64_t seed,
                                int jobs = 1);

// Row-parallel forest prediction; serial reference and OpenMP paths.
std::vector<double> forest_predict(const ExtraTreesModel& model, const Matrix& x,
                                   int jobs = 1);
std::vector<double> forest_predict_serial(const ExtraTreesModel& model, const Matrix& x);

} // namespace dhf
