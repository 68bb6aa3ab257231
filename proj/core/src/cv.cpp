#include "tridge/cv.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tridge/error.hpp"
#include "tridge/rng.hpp"

namespace tridge {

namespace {

Dataset subset(const Dataset& data, const std::vector<Eigen::Index>& rows) {
    Dataset out;
    out.X.resize(Eigen::Index(rows.size()), data.p());
    out.y.resize(Eigen::Index(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(Eigen::Index(i)) = data.X.row(rows[i]);
        out.y[Eigen::Index(i)] = data.y[rows[i]];
    }
    return out;
}

bool single_class(const Dataset& d) {
    if (d.y.size() == 0) return true;
    return (d.y.array() == d.y[0]).all();
}

} // namespace

std::vector<double> default_cv_grid(const Dataset& data, int points) {
    const double scale =
        std::max((data.X.transpose() * data.y).norm(), 1e-12) / (2.0 * double(data.n()));
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double lo = std::log10(1e-4), hi = std::log10(1e4);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : double(i) / double(points - 1);
        grid[std::size_t(i)] = scale * std::pow(10.0, lo + (hi - lo) * t);
    }
    return grid;
}

std::vector<std::vector<Eigen::Index>> make_folds(Eigen::Index n, int folds, std::uint64_t seed) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng(seed);
    for (std::size_t i = perm.size(); i > 1; --i) {
        const auto j = std::size_t(rng.uniform_int(0, i - 1));
        std::swap(perm[i - 1], perm[j]);
    }
    std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) {
        const auto begin = std::size_t(n * f / folds);
        const auto end = std::size_t(n * (f + 1) / folds);
        out[std::size_t(f)].assign(perm.begin() + std::ptrdiff_t(begin),
                                   perm.begin() + std::ptrdiff_t(end));
    }
    return out;
}

CvResult kfold_cv_ridge(Family family, const Dataset& data, const CvConfig& config) {
    validate(family, data);
    const Eigen::Index n = data.n();
    if (config.folds < 2 || config.folds > n) {
        throw InvalidArgument("fold count must satisfy 2 <= K <= n (K = " +
                              std::to_string(config.folds) + ", n = " + std::to_string(n) + ")");
    }
    std::vector<double> grid = config.r_grid.empty() ? default_cv_grid(data) : config.r_grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw InvalidArgument("cv grid entries must be positive and finite");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument("cv grid must be strictly increasing");
        }
    }
    if (grid.empty()) throw InvalidArgument("cv grid must not be empty");

    // Fold split, with one redraw for single-class Bernoulli training parts.
    std::uint64_t fold_seed = config.seed;
    std::vector<std::vector<Eigen::Index>> folds;
    std::vector<Dataset> train, test;
    for (int attempt = 0; attempt < 2; ++attempt) {
        fold_seed = config.seed + std::uint64_t(attempt);
        folds = make_folds(n, config.folds, fold_seed);
        train.clear();
        test.clear();
        bool degenerate = false;
        for (const auto& fold : folds) {
            std::vector<char> held(static_cast<std::size_t>(n), 0);
            for (auto i : fold) held[std::size_t(i)] = 1;
            std::vector<Eigen::Index> rest;
            rest.reserve(std::size_t(n) - fold.size());
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!held[std::size_t(i)]) rest.push_back(i);
            }
            train.push_back(subset(data, rest));
            test.push_back(subset(data, fold));
            if (family == Family::bernoulli && single_class(train.back())) degenerate = true;
        }
        if (!degenerate) break;
        if (attempt == 1) {
            throw InvalidData("cross-validation training fold contains a single class");
        }
    }

    CvResult result;
    result.r_grid = grid;
    result.folds = config.folds;
    result.fold_seed = fold_seed;
    result.cv_loss.assign(grid.size(), 0.0);

    // Each fold walks the grid from heavy to light regularization so warm
    // starts begin near the zero solution.
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const RidgeSolver solver(family, train[f], config.ridge);
        RidgeSolution prev;
        bool have_prev = false;
        for (std::size_t gi = grid.size(); gi-- > 0;) {
            RidgeSolution sol = solver.solve(grid[gi], have_prev ? &prev : nullptr);
            const Vector eta = test[f].X * sol.beta;
            result.cv_loss[gi] += negative_loglik_eta(family, test[f].y, eta);
            prev = std::move(sol);
            have_prev = true;
        }
    }
    for (double& loss : result.cv_loss) loss /= double(folds.size());

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (result.cv_loss[i] <= best) {
            best = result.cv_loss[i];
            result.selected_index = i;
        }
    }
    result.selected_r = grid[result.selected_index];
    result.refit = RidgeSolver(family, data, config.ridge).solve(result.selected_r);
    result.beta = result.refit.beta;
    return result;
}

} // namespace tridge
