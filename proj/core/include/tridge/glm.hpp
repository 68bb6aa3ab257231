#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace tridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Regression coefficients, one entry per feature.
using Coefficients = Eigen::VectorXd;

/// Exponential-family member with canonical link. The dispersion terms of
/// the density cancel from every objective here and are not represented.
enum class Family { gaussian, poisson, bernoulli };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

/// Design matrix (n x p) and outcomes (n).
struct Dataset {
    Matrix X;
    Vector y;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
};

/// Throws InvalidData when the dataset violates the invariants for `family`:
/// non-empty, finite, matching lengths, {0,1} outcomes for Bernoulli and
/// non-negative integer outcomes for Poisson.
void validate(Family family, const Dataset& data);

/// Linear predictors above this value are clamped before exponentiation
/// (Poisson).
inline constexpr double kExpClamp = 700.0;

/// b(z).
double cumulant(Family family, double z);
/// b'(z), the inverse link.
double inverse_link(Family family, double z);
/// b''(z).
double variance(Family family, double z);
/// True when `z` hits the Poisson exponent clamp.
bool saturates(Family family, double z);

/// Elementwise inverse link over a vector of linear predictors.
Vector mean(Family family, const Vector& eta);
/// Elementwise b'' over a vector of linear predictors.
Vector variance(Family family, const Vector& eta);

/// -sum_i (y_i eta_i - b(eta_i)) for given linear predictors.
double negative_loglik_eta(Family family, const Vector& y, const Vector& eta);

/// Negative log-likelihood data-fitting term L(beta).
double negative_loglik(Family family, const Dataset& data, const Coefficients& beta);

/// s(beta) = X^T (y - mu(beta)), the negative gradient of L.
Vector score(Family family, const Dataset& data, const Coefficients& beta);

/// Scale-aware zero threshold for ||s||: 1e-12 * max(1, ||X^T y||).
double score_tolerance(const Dataset& data);

/// L(beta) / ||s(beta)|| + ||beta||. Throws VanishingScore when
/// ||s(beta)|| <= score_tolerance(data).
double tridge_objective(Family family, const Dataset& data, const Coefficients& beta);

struct MarginConstant {
    double value;
    /// Set when b'' vanishes numerically somewhere on a segment and the
    /// constant is unbounded (value is +inf).
    bool vacuous;
};

/// Margin constant C for the pair (beta, target): the Bregman divergence of b
/// between x_i^T target and x_i^T beta is at least (1/C^2) times the squared
/// difference, for every row i. Gaussian returns the conventional C = 2.
MarginConstant margin_constant(Family family, const Dataset& data,
                               const Coefficients& beta, const Coefficients& target);

/// Smallest valid margin constant for the Gaussian family (b'' = 1).
inline constexpr double kTightGaussianMargin = 1.4142135623730951;

} // namespace tridge
