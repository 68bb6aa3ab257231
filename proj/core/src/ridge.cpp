#include "tridge/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "tridge/error.hpp"

namespace tridge {

namespace {

// Relative eigenvalue floor below which X^T X is treated as singular at r = 0.
constexpr double kSingularRatio = 1e-12;

void check_r(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidArgument("ridge tuning parameter must be finite and non-negative, got " +
                              std::to_string(r));
    }
}

} // namespace

RidgeSolver::RidgeSolver(Family family, Dataset data, RidgeOptions options)
    : family_(family), data_(std::move(data)), options_(options) {
    if (data_.y.size() != data_.n()) {
        throw DimensionMismatch("outcome length does not match design rows");
    }
    tol_kkt_ = options_.kkt_scale *
               std::max(1.0, (data_.X.transpose() * data_.y).norm());

    const bool wide = data_.p() > data_.n();
    if (family_ == Family::gaussian && !options_.force_newton) {
        if (wide) {
            mode_ = Mode::spectral_kernel;
            kernel_ = data_.X * data_.X.transpose();
            Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel_);
            eigvecs_ = eig.eigenvectors();
            eigvals_ = eig.eigenvalues().cwiseMax(0.0);
            projected_ = eigvecs_.transpose() * data_.y;
        } else {
            mode_ = Mode::spectral_primal;
            const Matrix gram = data_.X.transpose() * data_.X;
            Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
            eigvecs_ = eig.eigenvectors();
            eigvals_ = eig.eigenvalues().cwiseMax(0.0);
            projected_ = eigvecs_.transpose() * (data_.X.transpose() * data_.y);
        }
    } else if (wide) {
        mode_ = Mode::newton_kernel;
        kernel_ = data_.X * data_.X.transpose();
    } else {
        mode_ = Mode::newton_primal;
    }
}

double RidgeSolver::residual(double r, const Coefficients& beta) const {
    return (score(family_, data_, beta) - 2.0 * r * beta).norm();
}

RidgeSolution RidgeSolver::solve(double r, const RidgeSolution* warm) const {
    check_r(r);
    if (warm != nullptr && warm->beta.size() != 0 && warm->beta.size() != data_.p()) {
        throw DimensionMismatch("warm start length does not match feature count");
    }
    switch (mode_) {
    case Mode::spectral_primal: return solve_spectral_primal(r);
    case Mode::spectral_kernel: return solve_spectral_kernel(r);
    case Mode::newton_primal: return solve_newton_primal(r, warm);
    case Mode::newton_kernel: return solve_newton_kernel(r, warm);
    }
    throw Error("unreachable ridge solver mode");
}

RidgeSolution RidgeSolver::solve_spectral_primal(double r) const {
    if (r == 0.0 && eigvals_.minCoeff() <= kSingularRatio * std::max(1.0, eigvals_.maxCoeff())) {
        throw SingularSystem("X^T X is singular; r = 0 has no unique ridge solution");
    }
    const Vector shrunk = projected_.cwiseQuotient((eigvals_.array() + 2.0 * r).matrix());
    RidgeSolution out;
    out.r = r;
    out.beta = eigvecs_ * shrunk;
    out.kkt_residual = residual(r, out.beta);
    return out;
}

RidgeSolution RidgeSolver::solve_spectral_kernel(double r) const {
    if (r == 0.0) {
        throw SingularSystem("p > n: the unpenalized Hessian is singular; r must be positive");
    }
    const Vector shrunk = projected_.cwiseQuotient((eigvals_.array() + 2.0 * r).matrix());
    RidgeSolution out;
    out.r = r;
    out.dual = eigvecs_ * shrunk;
    out.beta = data_.X.transpose() * out.dual;
    out.kkt_residual = residual(r, out.beta);
    return out;
}

RidgeSolution RidgeSolver::solve_newton_primal(double r, const RidgeSolution* warm) const {
    const auto p = data_.p();
    const Matrix& X = data_.X;
    const Vector& y = data_.y;

    Coefficients beta = Coefficients::Zero(p);
    if (warm != nullptr && warm->beta.size() == p && warm->beta.allFinite()) {
        beta = warm->beta;
    }
    Vector eta = X * beta;
    double phi = negative_loglik_eta(family_, y, eta) + r * beta.squaredNorm();
    Vector grad = X.transpose() * (mean(family_, eta) - y) + 2.0 * r * beta;

    for (int it = 0; it < options_.max_iter; ++it) {
        const double gnorm = grad.norm();
        if (gnorm <= tol_kkt_) {
            RidgeSolution out{r, beta, 0.0, it, {}};
            out.kkt_residual = residual(r, beta);
            return out;
        }
        const Vector w = variance(family_, eta);
        Matrix hess = X.transpose() * w.asDiagonal() * X;
        hess.diagonal().array() += 2.0 * r;
        Eigen::LLT<Matrix> llt(hess);
        if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
            throw SingularSystem("ridge Hessian is singular at r = " + std::to_string(r));
        }
        const Vector step = -llt.solve(grad);

        double t = 1.0;
        bool accepted = false;
        Coefficients cand;
        Vector cand_eta;
        double cand_phi = 0.0;
        for (int h = 0; h <= options_.max_halvings; ++h, t *= 0.5) {
            cand = beta + t * step;
            cand_eta = X * cand;
            cand_phi = negative_loglik_eta(family_, y, cand_eta) + r * cand.squaredNorm();
            if (std::isfinite(cand_phi) && cand_phi < phi) {
                accepted = true;
                break;
            }
        }
        Vector cand_grad;
        if (!accepted) {
            // At the rounding floor of phi: keep the full step if it still
            // reduces the gradient.
            cand = beta + step;
            cand_eta = X * cand;
            cand_phi = negative_loglik_eta(family_, y, cand_eta) + r * cand.squaredNorm();
            cand_grad = X.transpose() * (mean(family_, cand_eta) - y) + 2.0 * r * cand;
            if (!(cand_grad.norm() < gnorm)) {
                throw NonConvergence("ridge Newton line search failed at r = " + std::to_string(r),
                                     beta, gnorm, it);
            }
        } else {
            cand_grad = X.transpose() * (mean(family_, cand_eta) - y) + 2.0 * r * cand;
        }
        beta = std::move(cand);
        eta = std::move(cand_eta);
        phi = cand_phi;
        grad = std::move(cand_grad);
    }
    if (grad.norm() <= tol_kkt_) {
        RidgeSolution out{r, beta, 0.0, options_.max_iter, {}};
        out.kkt_residual = residual(r, beta);
        return out;
    }
    throw NonConvergence("ridge Newton did not converge at r = " + std::to_string(r), beta,
                         grad.norm(), options_.max_iter);
}

// Kernel form for p > n: at a ridge solution beta = X^T a with
// a = (y - mu(K a)) / (2r), K = X X^T. Newton runs on
// Phi(a) = L(K a) + r a^T K a with step (W K + 2r I) d = -(2r a - (y - mu)).
RidgeSolution RidgeSolver::solve_newton_kernel(double r, const RidgeSolution* warm) const {
    if (r == 0.0) {
        throw SingularSystem("p > n: the unpenalized Hessian is singular; r must be positive");
    }
    const auto n = data_.n();
    const Vector& y = data_.y;
    const Matrix& K = kernel_;

    Vector a = Vector::Zero(n);
    if (warm != nullptr && warm->dual.size() == n && warm->dual.allFinite()) {
        a = warm->dual;
    } else if (warm != nullptr && warm->beta.size() == data_.p() && warm->beta.allFinite()) {
        a = (y - mean(family_, data_.X * warm->beta)) / (2.0 * r);
    }

    auto kkt_norm = [&](const Vector& g) { return std::sqrt(std::max(0.0, g.dot(K * g))); };

    Vector eta = K * a;
    Vector mu = mean(family_, eta);
    double phi = negative_loglik_eta(family_, y, eta) + r * a.dot(eta);
    Vector g = 2.0 * r * a - (y - mu);

    for (int it = 0; it < options_.max_iter; ++it) {
        const double res = kkt_norm(g);
        if (res <= tol_kkt_) {
            RidgeSolution out;
            out.r = r;
            out.dual = a;
            out.beta = data_.X.transpose() * a;
            out.kkt_residual = residual(r, out.beta);
            out.iterations = it;
            return out;
        }
        const Vector w = variance(family_, eta);
        Matrix jac = w.asDiagonal() * K;
        jac.diagonal().array() += 2.0 * r;
        const Vector step = -jac.partialPivLu().solve(g);
        if (!step.allFinite()) {
            throw SingularSystem("kernel Newton system is singular at r = " + std::to_string(r));
        }

        double t = 1.0;
        bool accepted = false;
        Vector cand, cand_eta;
        double cand_phi = 0.0;
        for (int h = 0; h <= options_.max_halvings; ++h, t *= 0.5) {
            cand = a + t * step;
            cand_eta = K * cand;
            cand_phi = negative_loglik_eta(family_, y, cand_eta) + r * cand.dot(cand_eta);
            if (std::isfinite(cand_phi) && cand_phi < phi) {
                accepted = true;
                break;
            }
        }
        Vector cand_mu, cand_g;
        if (!accepted) {
            cand = a + step;
            cand_eta = K * cand;
            cand_phi = negative_loglik_eta(family_, y, cand_eta) + r * cand.dot(cand_eta);
            cand_mu = mean(family_, cand_eta);
            cand_g = 2.0 * r * cand - (y - cand_mu);
            if (!(kkt_norm(cand_g) < res)) {
                throw NonConvergence("kernel ridge Newton line search failed at r = " +
                                         std::to_string(r),
                                     data_.X.transpose() * a, res, it);
            }
        } else {
            cand_mu = mean(family_, cand_eta);
            cand_g = 2.0 * r * cand - (y - cand_mu);
        }
        a = std::move(cand);
        eta = std::move(cand_eta);
        mu = std::move(cand_mu);
        g = std::move(cand_g);
        phi = cand_phi;
    }
    const Coefficients beta = data_.X.transpose() * a;
    if (kkt_norm(g) <= tol_kkt_) {
        RidgeSolution out{r, beta, residual(r, beta), options_.max_iter, a};
        return out;
    }
    throw NonConvergence("kernel ridge Newton did not converge at r = " + std::to_string(r), beta,
                         kkt_norm(g), options_.max_iter);
}

RidgeSolution fit_ridge(Family family, const Dataset& data, double r,
                        const std::optional<Coefficients>& warm_start, RidgeOptions options) {
    check_r(r);
    const RidgeSolver solver(family, data, options);
    if (warm_start) {
        RidgeSolution warm;
        warm.beta = *warm_start;
        return solver.solve(r, &warm);
    }
    return solver.solve(r);
}

RidgePath ridge_path(const RidgeSolver& solver, std::span<const double> r_grid) {
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] >= 0.0) || !std::isfinite(r_grid[i])) {
            throw InvalidArgument("ridge grid entry " + std::to_string(i) +
                                  " must be finite and non-negative");
        }
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
            throw InvalidArgument("ridge grid must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
    RidgePath path;
    path.entries.reserve(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const RidgeSolution* warm = path.entries.empty() ? nullptr : &path.entries.back().solution;
        try {
            RidgeSolution sol = solver.solve(r_grid[i], warm);
            const double lambda = 2.0 * r_grid[i] * sol.beta.norm();
            path.entries.push_back({r_grid[i], std::move(sol), lambda});
        } catch (const Error& e) {
            throw PathPointFailure("ridge path point " + std::to_string(i) + ": " + e.what(), i);
        }
    }
    return path;
}

RidgePath ridge_path(Family family, const Dataset& data, std::span<const double> r_grid,
                     RidgeOptions options) {
    if (r_grid.empty()) return {};
    return ridge_path(RidgeSolver(family, data, options), r_grid);
}

RidgeSolution edr_fit(const RidgeSolver& solver, double lambda, EdrOptions options) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("edr tuning parameter must be positive and finite");
    }
    const Dataset& data = solver.data();
    const double score_at_zero =
        score(solver.family(), data, Coefficients::Zero(data.p())).norm();
    if (lambda >= score_at_zero) {
        RidgeSolution zero;
        zero.r = std::numeric_limits<double>::infinity();
        zero.beta = Coefficients::Zero(data.p());
        zero.kkt_residual = 0.0;
        return zero;
    }

    auto induced = [](const RidgeSolution& s) { return 2.0 * s.r * s.beta.norm(); };

    // Bracket [lo, hi] with induced(lo) <= lambda <= induced(hi), searching
    // outward from r_hi_start within [r_lo, r_hi_max].
    RidgeSolution hi = solver.solve(options.r_hi_start);
    RidgeSolution lo;
    if (induced(hi) < lambda) {
        lo = hi;
        while (induced(hi) < lambda) {
            lo = hi;
            const double next = hi.r * 2.0;
            if (next > options.r_hi_max) {
                throw BracketFailure("edr: lambda(r) stays below target up to r = " +
                                     std::to_string(options.r_hi_max));
            }
            hi = solver.solve(next, &lo);
        }
    } else {
        lo = hi;
        while (induced(lo) > lambda) {
            hi = lo;
            const double next = lo.r * 0.5;
            if (next < options.r_lo) {
                throw BracketFailure("edr: lambda(r) stays above target down to r = " +
                                     std::to_string(options.r_lo));
            }
            lo = solver.solve(next, &hi);
        }
    }

    for (int step = 0; step < options.bisection_steps; ++step) {
        if (hi.r <= lo.r * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) break;
        const double mid_r = std::sqrt(lo.r * hi.r);
        if (!(mid_r > lo.r && mid_r < hi.r)) break;
        RidgeSolution mid = solver.solve(mid_r, &lo);
        if (induced(mid) < lambda) {
            lo = std::move(mid);
        } else {
            hi = std::move(mid);
        }
    }
    return std::abs(induced(lo) - lambda) <= std::abs(induced(hi) - lambda) ? lo : hi;
}

RidgeSolution edr_fit(Family family, const Dataset& data, double lambda, EdrOptions options,
                      RidgeOptions ridge_options) {
    return edr_fit(RidgeSolver(family, data, ridge_options), lambda, options);
}

} // namespace tridge
