#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tridge/glm.hpp"
#include "tridge/ridge.hpp"

namespace tridge {

/// Gradient of the t-ridge objective,
///   -s/||s|| + L * H s / ||s||^3 + beta/||beta||,  H = X^T diag(b''(X beta)) X,
/// with H s applied as two matrix-vector products. Requires beta != 0 and a
/// non-vanishing score.
Vector tridge_gradient(Family family, const Dataset& data, const Coefficients& beta);

struct FletcherReevesOptions {
    int max_iter = 2000;
    /// Stationarity tolerance relative to max(1, |f(init)|).
    double rel_tol = 1e-6;
    double armijo = 1e-4;
    int max_backtracks = 60;
    /// Stop once f drops this far (relative to max(1,|f(init)|)) below f(init):
    /// the objective is unbounded below along the iterates.
    double unbounded_ratio = 1e8;
    std::uint64_t perturb_seed = 0x5eed;
};

/// `collapsed`: the iterate reached the origin (||beta|| <= 1e-10 max(1, ||init||))
/// and is returned as exact zero.
enum class StationaryStatus {
    converged,
    max_iterations,
    line_search_failed,
    vanishing_score,
    unbounded,
    collapsed
};

std::string_view to_string(StationaryStatus status);

struct StationaryPoint {
    Coefficients beta;
    double objective = 0.0;
    double gradient_norm = 0.0;
    double tolerance = 0.0;
    int iterations = 0;
    StationaryStatus status = StationaryStatus::converged;
};

/// Nonlinear conjugate gradient (Fletcher-Reeves coefficient, Armijo
/// backtracking, steepest-descent restarts every p iterations or on
/// non-descent directions). Never throws on non-convergence: the best iterate
/// and a status are returned.
StationaryPoint find_stationary_point(Family family, const Dataset& data,
                                      const Coefficients& init,
                                      FletcherReevesOptions options = {});

/// Throwing variant: returns beta with ||grad f|| <= tol, throws
/// NonConvergence (carrying the best iterate) or VanishingScore otherwise.
Coefficients fletcher_reeves_stationary_point(Family family, const Dataset& data,
                                              const Coefficients& init,
                                              FletcherReevesOptions options = {});

/// Default Step-1 initializer: X^T y scaled to unit norm (e_1 if X^T y = 0).
Coefficients default_initializer(const Dataset& data);

struct TridgeConfig {
    double c = 0.1;
    int m = 1000;
    double r_floor = 0.05;
    double degenerate_r_min = 1e10;
    double degenerate_r_max = 1e11;
    std::optional<Coefficients> init;
    /// Skips Step 1 and uses this point as the stationary point.
    std::optional<Coefficients> stationary_point;
    FletcherReevesOptions stationary;
    RidgeOptions ridge;
};

enum class DatafitSign { positive, negative, zero };
std::string_view to_string(DatafitSign sign);

struct TridgeGrid {
    double r_min = 0.0;
    double r_max = 0.0;
    int m = 0;
    bool degenerate = false;
};

struct TridgeFit {
    Coefficients beta;
    double selected_r = 0.0;
    /// ||s(beta)||, the edr parameter at which beta sits on the edr path.
    double lambda_hat = 0.0;
    double objective = 0.0;
    double kkt_residual = 0.0;
    std::size_t selected_index = 0;

    Coefficients sp_beta;
    double sp_r = 0.0;
    StationaryStatus sp_status = StationaryStatus::converged;
    int sp_iterations = 0;

    TridgeGrid grid;
    std::vector<double> grid_r;
    /// Objective per grid point, NaN where undefined (vanishing score).
    std::vector<double> grid_objective;

    DatafitSign datafit_sign = DatafitSign::zero;
    double datafit = 0.0;
};

/// Dead zone for sign tests on L: 1e-8 * max(1, ||y||^2).
double datafit_dead_zone(const Dataset& data);

/// Tuning-free ridge: stationary point of the t-ridge objective, a narrowed
/// ridge-path grid around the tuning parameter it implies, and the grid point
/// minimizing the objective (ties toward smaller r).
TridgeFit tridge_fit(Family family, const Dataset& data, const TridgeConfig& config = {});

enum class LambdaOrder { lambda_hat_geq_star, lambda_hat_leq_star, indeterminate };
std::string_view to_string(LambdaOrder order);

/// Sign test on L(beta_hat): positive implies lambda_hat >= lambda*, negative
/// implies lambda_hat <= lambda*.
LambdaOrder lambda_order_diagnostic(Family family, const Dataset& data, const TridgeFit& fit);

struct BoundCheck {
    double lambda = 0.0;
    double margin_c = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool vacuous = false;
    bool pass = false;
};

struct BoundReport {
    double lambda_star = 0.0;
    double lambda_hat = 0.0;
    /// ||X(beta_hat - beta*)||^2 <= 2 C^2 max(lambda*, lambda_hat) ||beta*||.
    BoundCheck tridge;
    /// ||X(beta_edr(lambda) - beta*)||^2 <= 2 C^2 lambda ||beta*|| for lambda >= lambda*.
    std::vector<BoundCheck> edr;
};

/// Default multipliers of lambda* used for the edr checks.
inline constexpr double kEdrLambdaMultipliers[] = {1.0, 1.5, 2.0, 4.0, 8.0};

/// Evaluates both prediction bounds for a fit with known truth. `edr_lambdas`
/// defaults to kEdrLambdaMultipliers * lambda*; non-positive entries are skipped.
BoundReport verify_prediction_bounds(Family family, const Dataset& data,
                                     const Coefficients& beta_star, const TridgeFit& fit,
                                     std::span<const double> edr_lambdas = {});

} // namespace tridge
