#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tridge/glm.hpp"

namespace tridge {

enum class Estimator { tridge, cv5, cv10, mle };

std::string_view to_string(Estimator estimator);
std::optional<Estimator> parse_estimator(std::string_view name);

struct GaussianNoiseSpec {
    double sigma2 = 0.0;
};

struct SimConfig {
    Eigen::Index n = 100;
    Eigen::Index p = 300;
    double k = 0.0;
    Family family = Family::gaussian;
    double snr = 10.0;
    int replications = 100;
    std::uint64_t seed = 0;
    std::vector<Estimator> estimators{Estimator::tridge, Estimator::cv5, Estimator::cv10};
    /// Worker threads; 0 reads TRIDGE_THREADS, falling back to hardware concurrency.
    int threads = 0;
};

/// Throws InvalidArgument unless n >= 2, p >= 1, 0 <= k < 1, snr > 0 and
/// replications >= 1.
void validate(const SimConfig& config);

/// Seed of the data-generating stream for one replication of one cell.
/// Depends only on (seed, family, n, p, k, replication), never on the
/// estimator list.
std::uint64_t replication_seed(const SimConfig& config, int replication);

/// Rows drawn from N(0, Sigma) with Sigma_uv = k^|u-v| through the AR(1)
/// recursion z_1 = e_1, z_j = k z_{j-1} + sqrt(1-k^2) e_j.
Matrix generate_raw_design(Eigen::Index n, Eigen::Index p, double k, std::uint64_t seed);
/// generate_raw_design with every column rescaled to unit Euclidean norm.
Matrix generate_design(Eigen::Index n, Eigen::Index p, double k, std::uint64_t seed);

/// Standard normal draw projected onto the row space of X (SVD, singular
/// values below 1e-10 * largest dropped).
Coefficients generate_beta(const Matrix& X, std::uint64_t seed);
/// Projector applied to a given vector.
Coefficients project_row_space(const Matrix& X, const Vector& v);

/// Noise variance giving the requested empirical signal-to-noise ratio
/// (sum z^2 - (sum z)^2/n) / (sigma^2 (n-1)) for z = X beta*.
GaussianNoiseSpec sigma_for_snr(const Matrix& X, const Coefficients& beta_star, double snr);

/// Outcomes under the model; `noise` is required iff family is Gaussian.
Vector sample_outcomes(Family family, const Matrix& X, const Coefficients& beta_star,
                       const std::optional<GaussianNoiseSpec>& noise, std::uint64_t seed);

/// ||X(beta_hat - beta*)|| / ||X beta*||.
double relative_prediction_error(const Matrix& X, const Coefficients& beta_hat,
                                 const Coefficients& beta_star);

/// One simulated replication and its truth.
struct SimInstance {
    Dataset data;
    Coefficients beta_star;
    std::optional<GaussianNoiseSpec> noise;
};

SimInstance generate_instance(const SimConfig& config, int replication);

/// Fits one estimator on a dataset. cv5/cv10 use fold seed `cv_seed`.
Coefficients fit_estimator(Estimator estimator, Family family, const Dataset& data,
                           std::uint64_t cv_seed);

struct EstimatorSummary {
    Estimator estimator;
    double mean = 0.0;
    double sd = 0.0;
    /// Relative prediction error per successful replication, in replication order.
    std::vector<double> errors;
};

struct SimReport {
    SimConfig config;
    std::vector<EstimatorSummary> estimators;
    /// Replication indices that were used (all estimators succeeded).
    std::vector<int> replications_used;
    std::vector<int> failed_replications;
    std::vector<std::string> failure_messages;
    /// False when more than 5% of replications failed.
    bool valid = true;
    double runtime_seconds = 0.0;
};

/// Mean and sample standard deviation (n-1 denominator; 0 for one value).
std::pair<double, double> mean_sd(const std::vector<double>& values);

SimReport run_experiment(const SimConfig& config);

struct ConvergencePoint {
    Eigen::Index n;
    /// Mean over replications of ||b_tridge - b_mle|| / ||b_mle||.
    double relative_error;
    int replications_used;
    /// Replications skipped because the MLE failed.
    int mle_failures;
};

struct ConvergenceConfig {
    std::vector<Eigen::Index> n_grid{40, 80, 160, 320, 640};
    Eigen::Index p = 20;
    double k = 0.0;
    Family family = Family::gaussian;
    double snr = 10.0;
    int replications = 10;
    std::uint64_t seed = 0;
    /// The convergence study uses the raw design by default: with unit-norm
    /// columns X^T X stays O(1) and no fixed-r estimator approaches the MLE.
    bool normalize_columns = false;
};

/// Distance between the t-ridge and the unpenalized MLE as n grows.
std::vector<ConvergencePoint> mle_convergence_study(const ConvergenceConfig& config);

/// Worker count from TRIDGE_THREADS (>= 1), else hardware concurrency.
int default_thread_count();

} // namespace tridge
