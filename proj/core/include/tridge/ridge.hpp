#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tridge/glm.hpp"

namespace tridge {

/// Minimizer of L(beta) + r ||beta||^2 for one tuning parameter.
struct RidgeSolution {
    double r = 0.0;
    Coefficients beta;
    /// ||s(beta) - 2 r beta||, the ridge stationarity residual.
    double kkt_residual = 0.0;
    int iterations = 0;
    /// Kernel-form coefficients a with beta = X^T a (p > n Newton and
    /// spectral solves only; empty otherwise). Used for warm starts.
    Vector dual;
};

struct RidgePathEntry {
    double r;
    RidgeSolution solution;
    /// Induced edr parameter 2 r ||beta(r)||.
    double lambda_edr;
};

struct RidgePath {
    std::vector<RidgePathEntry> entries;
};

struct RidgeOptions {
    int max_iter = 200;
    int max_halvings = 30;
    /// tol_kkt = kkt_scale * max(1, ||X^T y||).
    double kkt_scale = 1e-8;
    /// Use damped Newton even for the Gaussian family.
    bool force_newton = false;
};

/// Ridge solver bound to one dataset. Precomputes what every tuning parameter
/// shares: a spectral factorization for the Gaussian family (X^T X when
/// p <= n, X X^T otherwise), or the kernel X X^T for p > n Newton solves.
class RidgeSolver {
public:
    RidgeSolver(Family family, Dataset data, RidgeOptions options = {});

    /// Solves at `r`, optionally warm-started. Throws SingularSystem for r = 0
    /// when the unpenalized Hessian is singular, NonConvergence after
    /// options.max_iter Newton steps.
    RidgeSolution solve(double r, const RidgeSolution* warm = nullptr) const;

    double tol_kkt() const { return tol_kkt_; }
    Family family() const { return family_; }
    const Dataset& data() const { return data_; }

private:
    enum class Mode { spectral_primal, spectral_kernel, newton_primal, newton_kernel };

    RidgeSolution solve_spectral_primal(double r) const;
    RidgeSolution solve_spectral_kernel(double r) const;
    RidgeSolution solve_newton_primal(double r, const RidgeSolution* warm) const;
    RidgeSolution solve_newton_kernel(double r, const RidgeSolution* warm) const;
    double residual(double r, const Coefficients& beta) const;

    Family family_;
    Dataset data_;
    RidgeOptions options_;
    Mode mode_;
    double tol_kkt_;

    Matrix eigvecs_;
    Vector eigvals_;
    Vector projected_;  // eigvecs^T X^T y (primal) or eigvecs^T y (kernel)
    Matrix kernel_;
};

/// Single ridge fit; convenience wrapper over RidgeSolver.
RidgeSolution fit_ridge(Family family, const Dataset& data, double r,
                        const std::optional<Coefficients>& warm_start = std::nullopt,
                        RidgeOptions options = {});

/// Solves every grid point with warm starts from the previous one. The grid
/// must be strictly increasing and non-negative.
RidgePath ridge_path(Family family, const Dataset& data, std::span<const double> r_grid,
                     RidgeOptions options = {});
RidgePath ridge_path(const RidgeSolver& solver, std::span<const double> r_grid);

struct EdrOptions {
    double r_lo = 1e-8;
    double r_hi_start = 1.0;
    double r_hi_max = 1e12;
    int bisection_steps = 200;
};

/// Minimizer of L(beta) + lambda ||beta|| obtained from the ridge path: finds
/// r* with 2 r* ||beta(r*)|| = lambda by log-scale bisection. For
/// lambda >= ||s(0)|| the solution is zero and r is +inf.
RidgeSolution edr_fit(Family family, const Dataset& data, double lambda,
                      EdrOptions options = {}, RidgeOptions ridge_options = {});
RidgeSolution edr_fit(const RidgeSolver& solver, double lambda, EdrOptions options = {});

} // namespace tridge
