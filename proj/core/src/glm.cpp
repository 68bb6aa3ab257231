#include "tridge/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tridge/error.hpp"

namespace tridge {

namespace {

constexpr int kMarginSamples = 129;

void check_beta(const Dataset& data, const Coefficients& beta) {
    if (beta.size() != data.p()) {
        throw DimensionMismatch("coefficient length " + std::to_string(beta.size()) +
                                " does not match feature count " +
                                std::to_string(data.p()));
    }
}

double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

std::string_view to_string(Family family) {
    switch (family) {
    case Family::gaussian: return "gaussian";
    case Family::poisson: return "poisson";
    case Family::bernoulli: return "bernoulli";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "poisson") return Family::poisson;
    if (name == "bernoulli" || name == "binomial") return Family::bernoulli;
    return std::nullopt;
}

void validate(Family family, const Dataset& data) {
    if (data.n() < 1 || data.p() < 1) {
        throw InvalidData("dataset must have at least one row and one column");
    }
    if (data.y.size() != data.n()) {
        throw InvalidData("outcome length " + std::to_string(data.y.size()) +
                          " does not match row count " + std::to_string(data.n()));
    }
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        for (Eigen::Index i = 0; i < data.n(); ++i) {
            if (!std::isfinite(data.X(i, j))) {
                throw InvalidData("non-finite design entry at row " + std::to_string(i) +
                                      ", column " + std::to_string(j),
                                  long(i), long(j));
            }
        }
    }
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        const double yi = data.y[i];
        if (!std::isfinite(yi)) {
            throw InvalidData("non-finite outcome at row " + std::to_string(i), long(i));
        }
        if (family == Family::bernoulli && yi != 0.0 && yi != 1.0) {
            throw InvalidData("bernoulli outcome must be 0 or 1 at row " + std::to_string(i),
                              long(i));
        }
        if (family == Family::poisson && (yi < 0.0 || yi != std::floor(yi))) {
            throw InvalidData("poisson outcome must be a non-negative integer at row " +
                                  std::to_string(i),
                              long(i));
        }
    }
}

double cumulant(Family family, double z) {
    switch (family) {
    case Family::gaussian: return 0.5 * z * z;
    case Family::poisson: return std::exp(std::min(z, kExpClamp));
    case Family::bernoulli:
        return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    return 0.0;
}

double inverse_link(Family family, double z) {
    switch (family) {
    case Family::gaussian: return z;
    case Family::poisson: return std::exp(std::min(z, kExpClamp));
    case Family::bernoulli: return logistic(z);
    }
    return 0.0;
}

double variance(Family family, double z) {
    switch (family) {
    case Family::gaussian: return 1.0;
    case Family::poisson: return std::exp(std::min(z, kExpClamp));
    case Family::bernoulli: return logistic(z) * logistic(-z);
    }
    return 0.0;
}

bool saturates(Family family, double z) {
    return family == Family::poisson && z > kExpClamp;
}

Vector mean(Family family, const Vector& eta) {
    if (family == Family::gaussian) return eta;
    return eta.unaryExpr([family](double z) { return inverse_link(family, z); });
}

Vector variance(Family family, const Vector& eta) {
    return eta.unaryExpr([family](double z) { return variance(family, z); });
}

double negative_loglik_eta(Family family, const Vector& y, const Vector& eta) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        total += cumulant(family, eta[i]) - y[i] * eta[i];
    }
    return total;
}

double negative_loglik(Family family, const Dataset& data, const Coefficients& beta) {
    check_beta(data, beta);
    return negative_loglik_eta(family, data.y, data.X * beta);
}

Vector score(Family family, const Dataset& data, const Coefficients& beta) {
    check_beta(data, beta);
    const Vector eta = data.X * beta;
    return data.X.transpose() * (data.y - mean(family, eta));
}

double score_tolerance(const Dataset& data) {
    const double xty = (data.X.transpose() * data.y).norm();
    return 1e-12 * std::max(1.0, xty);
}

double tridge_objective(Family family, const Dataset& data, const Coefficients& beta) {
    check_beta(data, beta);
    const Vector eta = data.X * beta;
    const double snorm = (data.X.transpose() * (data.y - mean(family, eta))).norm();
    if (snorm <= score_tolerance(data)) {
        throw VanishingScore("score vanishes; t-ridge objective undefined", snorm);
    }
    return negative_loglik_eta(family, data.y, eta) / snorm + beta.norm();
}

MarginConstant margin_constant(Family family, const Dataset& data,
                               const Coefficients& beta, const Coefficients& target) {
    check_beta(data, beta);
    check_beta(data, target);
    if (family == Family::gaussian) {
        return {2.0, false};
    }
    const Vector eta = data.X * beta;
    const Vector eta_star = data.X * target;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        double min_curv = std::numeric_limits<double>::infinity();
        for (int t = 0; t < kMarginSamples; ++t) {
            const double z =
                eta_star[i] + (eta[i] - eta_star[i]) * double(t) / (kMarginSamples - 1);
            min_curv = std::min(min_curv, variance(family, z));
        }
        if (!(min_curv > 0.0)) {
            return {std::numeric_limits<double>::infinity(), true};
        }
        worst = std::max(worst, std::sqrt(2.0 / min_curv));
    }
    if (!std::isfinite(worst)) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {worst, false};
}

} // namespace tridge
