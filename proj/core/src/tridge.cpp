#include "tridge/tridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tridge/error.hpp"
#include "tridge/rng.hpp"

namespace tridge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Evaluation {
    bool valid = false;
    double f = 0.0;
    double datafit = 0.0;
    double score_norm = 0.0;
    Vector eta;
    Vector score;
};

double collapse_radius(const Coefficients& init) {
    return 1e-10 * std::max(1.0, init.norm());
}

Evaluation evaluate(Family family, const Dataset& data, const Coefficients& beta, double eps) {
    Evaluation ev;
    ev.eta = data.X * beta;
    ev.score = data.X.transpose() * (data.y - mean(family, ev.eta));
    ev.score_norm = ev.score.norm();
    ev.datafit = negative_loglik_eta(family, data.y, ev.eta);
    const double bnorm = beta.norm();
    ev.valid = ev.score_norm > eps && bnorm > 0.0 && std::isfinite(ev.datafit);
    ev.f = ev.valid ? ev.datafit / ev.score_norm + bnorm : kNaN;
    return ev;
}

Vector gradient_from(Family family, const Dataset& data, const Coefficients& beta,
                     const Evaluation& ev) {
    const Vector w = variance(family, ev.eta);
    const Vector hs = data.X.transpose() * (w.cwiseProduct(data.X * ev.score));
    const double sn = ev.score_norm;
    return -ev.score / sn + (ev.datafit / (sn * sn * sn)) * hs + beta / beta.norm();
}

} // namespace

std::string_view to_string(StationaryStatus status) {
    switch (status) {
    case StationaryStatus::converged: return "converged";
    case StationaryStatus::max_iterations: return "max_iterations";
    case StationaryStatus::line_search_failed: return "line_search_failed";
    case StationaryStatus::vanishing_score: return "vanishing_score";
    case StationaryStatus::unbounded: return "unbounded";
    case StationaryStatus::collapsed: return "collapsed";
    }
    return "unknown";
}

std::string_view to_string(DatafitSign sign) {
    switch (sign) {
    case DatafitSign::positive: return "positive";
    case DatafitSign::negative: return "negative";
    case DatafitSign::zero: return "zero";
    }
    return "unknown";
}

std::string_view to_string(LambdaOrder order) {
    switch (order) {
    case LambdaOrder::lambda_hat_geq_star: return "lambda_hat_geq_star";
    case LambdaOrder::lambda_hat_leq_star: return "lambda_hat_leq_star";
    case LambdaOrder::indeterminate: return "indeterminate";
    }
    return "unknown";
}

Vector tridge_gradient(Family family, const Dataset& data, const Coefficients& beta) {
    if (beta.size() != data.p()) {
        throw DimensionMismatch("coefficient length does not match feature count");
    }
    const Evaluation ev = evaluate(family, data, beta, score_tolerance(data));
    if (beta.norm() == 0.0) {
        throw InvalidArgument("t-ridge gradient is undefined at beta = 0");
    }
    if (!ev.valid) {
        throw VanishingScore("score vanishes; t-ridge gradient undefined", ev.score_norm);
    }
    return gradient_from(family, data, beta, ev);
}

StationaryPoint find_stationary_point(Family family, const Dataset& data,
                                      const Coefficients& init,
                                      FletcherReevesOptions options) {
    if (init.size() != data.p()) {
        throw DimensionMismatch("initial point length does not match feature count");
    }
    const double eps = score_tolerance(data);
    const auto p = data.p();

    StationaryPoint out;
    out.beta = init;
    Evaluation ev = evaluate(family, data, init, eps);
    if (!ev.valid) {
        out.status = StationaryStatus::vanishing_score;
        out.objective = ev.f;
        out.gradient_norm = kNaN;
        return out;
    }
    const double f0 = ev.f;
    const double zero_radius = collapse_radius(init);
    const double scale = std::max(1.0, std::abs(f0));
    out.tolerance = options.rel_tol * scale;

    Coefficients beta = init;
    Vector g = gradient_from(family, data, beta, ev);
    Vector d = -g;
    double step = 1.0 / std::max(g.norm(), 1e-300);
    Eigen::Index since_restart = 0;
    bool perturbed = false;
    out.status = StationaryStatus::max_iterations;

    int it = 0;
    for (; it < options.max_iter; ++it) {
        const double gnorm2 = g.squaredNorm();
        if (std::sqrt(gnorm2) <= out.tolerance) {
            out.status = StationaryStatus::converged;
            break;
        }
        if (ev.f < f0 - options.unbounded_ratio * scale) {
            out.status = StationaryStatus::unbounded;
            break;
        }
        double slope = g.dot(d);
        if (!(slope < 0.0) || since_restart >= p) {
            d = -g;
            slope = -gnorm2;
            since_restart = 0;
        }

        double t = step;
        bool accepted = false;
        bool hit_guard = false;
        Coefficients cand;
        Evaluation cand_ev;
        for (int k = 0; k < options.max_backtracks; ++k, t *= 0.5) {
            cand = beta + t * d;
            cand_ev = evaluate(family, data, cand, eps);
            if (!cand_ev.valid) {
                hit_guard = true;
                continue;
            }
            if (cand_ev.f <= ev.f + options.armijo * t * slope) {
                accepted = true;
                break;
            }
        }

        if (!accepted) {
            if (hit_guard && !perturbed) {
                perturbed = true;
                Rng rng(options.perturb_seed);
                Vector z = rng.normal_vector(p);
                z *= 1e-3 * std::max(1.0, beta.norm()) / std::max(z.norm(), 1e-300);
                const Coefficients moved = beta + z;
                const Evaluation moved_ev = evaluate(family, data, moved, eps);
                if (moved_ev.valid) {
                    beta = moved;
                    ev = moved_ev;
                    g = gradient_from(family, data, beta, ev);
                    d = -g;
                    since_restart = 0;
                    step = 1.0 / std::max(g.norm(), 1e-300);
                    continue;
                }
            }
            if (hit_guard) {
                out.status = StationaryStatus::vanishing_score;
                break;
            }
            if (since_restart > 0) {
                d = -g;
                since_restart = 0;
                continue;
            }
            out.status = StationaryStatus::line_search_failed;
            break;
        }

        if (cand.norm() <= zero_radius) {
            beta = Coefficients::Zero(p);
            ev = evaluate(family, data, beta, eps);
            g = Vector::Constant(p, kNaN);
            out.status = StationaryStatus::collapsed;
            ++it;
            break;
        }
        const Vector g_new = gradient_from(family, data, cand, cand_ev);
        const double fr = g_new.squaredNorm() / gnorm2;
        d = -g_new + fr * d;
        beta = std::move(cand);
        ev = std::move(cand_ev);
        g = g_new;
        ++since_restart;
        step = std::min(2.0 * t, 1e12);
    }

    out.beta = beta;
    // At the origin f is the limit L(0)/||s(0)||.
    out.objective = out.status == StationaryStatus::collapsed && ev.score_norm > eps
                        ? ev.datafit / ev.score_norm
                        : ev.f;
    out.gradient_norm = g.norm();
    out.iterations = it;
    return out;
}

Coefficients fletcher_reeves_stationary_point(Family family, const Dataset& data,
                                              const Coefficients& init,
                                              FletcherReevesOptions options) {
    StationaryPoint sp = find_stationary_point(family, data, init, options);
    switch (sp.status) {
    case StationaryStatus::converged: return sp.beta;
    case StationaryStatus::vanishing_score:
        throw VanishingScore("Fletcher-Reeves iterate entered the vanishing-score region",
                             score(family, data, sp.beta).norm());
    default:
        throw NonConvergence(std::string("Fletcher-Reeves stopped: ") +
                                 std::string(to_string(sp.status)),
                             sp.beta, sp.gradient_norm, sp.iterations);
    }
}

Coefficients default_initializer(const Dataset& data) {
    Coefficients b0 = data.X.transpose() * data.y;
    const double norm = b0.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        b0.setZero();
        b0[0] = 1.0;
        return b0;
    }
    return b0 / norm;
}

double datafit_dead_zone(const Dataset& data) {
    return 1e-8 * std::max(1.0, data.y.squaredNorm());
}

TridgeFit tridge_fit(Family family, const Dataset& data, const TridgeConfig& config) {
    validate(family, data);
    if (!(config.c > 0.0)) throw InvalidArgument("grid half-width c must be positive");
    if (config.m < 2) throw InvalidArgument("grid size m must be at least 2");

    TridgeFit fit;
    const Coefficients init = config.init ? *config.init : default_initializer(data);

    // Step 1: stationary point of the t-ridge objective.
    if (config.stationary_point) {
        if (config.stationary_point->size() != data.p()) {
            throw DimensionMismatch("stationary point length does not match feature count");
        }
        fit.sp_beta = *config.stationary_point;
        fit.sp_status = StationaryStatus::converged;
    } else {
        const StationaryPoint sp = find_stationary_point(family, data, init, config.stationary);
        fit.sp_beta = sp.beta;
        fit.sp_status = sp.status;
        fit.sp_iterations = sp.iterations;
    }

    // Step 2: narrowed interval around the implied ridge parameter.
    const double sp_norm = fit.sp_beta.norm();
    if (sp_norm <= collapse_radius(init)) {
        fit.grid = {config.degenerate_r_min, config.degenerate_r_max, config.m, true};
        fit.sp_r = std::numeric_limits<double>::infinity();
    } else {
        fit.sp_r = score(family, data, fit.sp_beta).norm() / (2.0 * sp_norm);
        const double r_min = std::max(config.r_floor, fit.sp_r - config.c);
        double r_max = fit.sp_r + config.c;
        if (!(r_max > r_min)) r_max = r_min + config.c;
        fit.grid = {r_min, r_max, config.m, false};
    }

    // Step 3: ridge path over r_i = r_min + (r_max - r_min) i / m, i = 1..m.
    const RidgeSolver solver(family, data, config.ridge);
    const double eps = score_tolerance(data);
    fit.grid_r.resize(config.m);
    fit.grid_objective.assign(config.m, kNaN);

    RidgeSolution prev;
    RidgeSolution best;
    double best_f = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (int i = 1; i <= config.m; ++i) {
        const double r = fit.grid.r_min + (fit.grid.r_max - fit.grid.r_min) * double(i) / config.m;
        fit.grid_r[i - 1] = r;
        RidgeSolution sol = solver.solve(r, i > 1 ? &prev : nullptr);
        const Evaluation ev = evaluate(family, data, sol.beta, eps);
        if (ev.score_norm > eps && std::isfinite(ev.datafit)) {
            const double f = ev.datafit / ev.score_norm + sol.beta.norm();
            fit.grid_objective[i - 1] = f;
            if (f < best_f) {
                best_f = f;
                best = sol;
                fit.selected_index = std::size_t(i - 1);
                have_best = true;
            }
        }
        prev = std::move(sol);
    }
    if (!have_best) {
        throw AllGridFailed("no grid point yields a defined t-ridge objective");
    }

    fit.beta = best.beta;
    fit.selected_r = best.r;
    fit.kkt_residual = best.kkt_residual;
    fit.objective = best_f;
    fit.lambda_hat = score(family, data, fit.beta).norm();
    fit.datafit = negative_loglik(family, data, fit.beta);
    const double dz = datafit_dead_zone(data);
    fit.datafit_sign = fit.datafit > dz    ? DatafitSign::positive
                       : fit.datafit < -dz ? DatafitSign::negative
                                           : DatafitSign::zero;
    return fit;
}

LambdaOrder lambda_order_diagnostic(Family family, const Dataset& data, const TridgeFit& fit) {
    const double datafit = negative_loglik(family, data, fit.beta);
    const double dz = datafit_dead_zone(data);
    if (datafit > dz) return LambdaOrder::lambda_hat_geq_star;
    if (datafit < -dz) return LambdaOrder::lambda_hat_leq_star;
    return LambdaOrder::indeterminate;
}

namespace {

BoundCheck check_bound(Family family, const Dataset& data, const Coefficients& beta,
                       const Coefficients& beta_star, double lambda) {
    BoundCheck c;
    c.lambda = lambda;
    const MarginConstant mc = margin_constant(family, data, beta, beta_star);
    c.margin_c = mc.value;
    c.vacuous = mc.vacuous;
    c.lhs = (data.X * (beta - beta_star)).squaredNorm();
    c.rhs = 2.0 * mc.value * mc.value * lambda * beta_star.norm();
    c.pass = mc.vacuous || c.lhs <= c.rhs * (1.0 + 1e-12) + 1e-12;
    return c;
}

} // namespace

BoundReport verify_prediction_bounds(Family family, const Dataset& data,
                                     const Coefficients& beta_star, const TridgeFit& fit,
                                     std::span<const double> edr_lambdas) {
    if (beta_star.size() != data.p() || fit.beta.size() != data.p()) {
        throw DimensionMismatch("coefficient length does not match feature count");
    }
    BoundReport report;
    report.lambda_star = score(family, data, beta_star).norm();
    report.lambda_hat = fit.lambda_hat;
    report.tridge = check_bound(family, data, fit.beta, beta_star,
                                std::max(report.lambda_star, report.lambda_hat));

    std::vector<double> lambdas;
    if (edr_lambdas.empty()) {
        for (double m : kEdrLambdaMultipliers) lambdas.push_back(m * report.lambda_star);
    } else {
        lambdas.assign(edr_lambdas.begin(), edr_lambdas.end());
    }
    const RidgeSolver solver(family, data);
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) continue;
        const RidgeSolution edr = edr_fit(solver, lambda);
        report.edr.push_back(check_bound(family, data, edr.beta, beta_star, lambda));
    }
    return report;
}

} // namespace tridge
