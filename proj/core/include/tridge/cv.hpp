#pragma once

#include <cstdint>
#include <vector>

#include "tridge/glm.hpp"
#include "tridge/ridge.hpp"

namespace tridge {

struct CvConfig {
    int folds = 5;
    /// Strictly increasing positive grid; empty selects default_cv_grid().
    std::vector<double> r_grid;
    std::uint64_t seed = 0;
    RidgeOptions ridge;
};

/// 100 log-spaced points over [1e-4, 1e4] * ||X^T y|| / (2n).
std::vector<double> default_cv_grid(const Dataset& data, int points = 100);

/// Observation index lists of each fold: a seeded Fisher-Yates permutation
/// cut into `folds` contiguous, near-equal blocks.
std::vector<std::vector<Eigen::Index>> make_folds(Eigen::Index n, int folds, std::uint64_t seed);

struct CvResult {
    Coefficients beta;
    double selected_r = 0.0;
    std::size_t selected_index = 0;
    std::vector<double> r_grid;
    /// Mean over folds of the held-out negative log-likelihood, per grid point.
    std::vector<double> cv_loss;
    int folds = 0;
    /// Seed actually used for the fold split (seed + 1 after a resample).
    std::uint64_t fold_seed = 0;
    RidgeSolution refit;
};

/// K-fold cross-validated ridge: selects the grid point with minimal mean
/// held-out loss (ties toward larger r) and refits on all data. For the
/// Bernoulli family a split whose training part holds a single class is
/// redrawn once with seed + 1, then reported as InvalidData.
CvResult kfold_cv_ridge(Family family, const Dataset& data, const CvConfig& config);

} // namespace tridge
