#include "tridge/sim.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

#include <Eigen/SVD>

#include "tridge/cv.hpp"
#include "tridge/error.hpp"
#include "tridge/ridge.hpp"
#include "tridge/rng.hpp"
#include "tridge/tridge.hpp"

namespace tridge {

namespace {

enum Stream : std::uint64_t { design_stream = 0, beta_stream = 1, outcome_stream = 2, cv_stream = 3 };

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    }
}

} // namespace

std::string_view to_string(Estimator estimator) {
    switch (estimator) {
    case Estimator::tridge: return "tridge";
    case Estimator::cv5: return "cv5";
    case Estimator::cv10: return "cv10";
    case Estimator::mle: return "mle";
    }
    return "unknown";
}

std::optional<Estimator> parse_estimator(std::string_view name) {
    if (name == "tridge") return Estimator::tridge;
    if (name == "cv5") return Estimator::cv5;
    if (name == "cv10") return Estimator::cv10;
    if (name == "mle") return Estimator::mle;
    return std::nullopt;
}

int default_thread_count() {
    if (const char* env = std::getenv("TRIDGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return int(std::min(v, 1024L));
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

void validate(const SimConfig& config) {
    if (config.n < 2) throw InvalidArgument("n must be at least 2");
    if (config.p < 1) throw InvalidArgument("p must be at least 1");
    if (!(config.k >= 0.0 && config.k < 1.0)) throw InvalidArgument("k must lie in [0, 1)");
    if (!(config.snr > 0.0) || !std::isfinite(config.snr)) {
        throw InvalidArgument("snr must be positive");
    }
    if (config.replications < 1) throw InvalidArgument("replications must be at least 1");
    if (config.estimators.empty()) throw InvalidArgument("at least one estimator is required");
}

std::uint64_t replication_seed(const SimConfig& config, int replication) {
    std::uint64_t h = derive_seed(config.seed, std::uint64_t(config.family));
    h = derive_seed(h, std::uint64_t(config.n));
    h = derive_seed(h, std::uint64_t(config.p));
    h = derive_seed(h, std::bit_cast<std::uint64_t>(config.k));
    return derive_seed(h, std::uint64_t(replication));
}

Matrix generate_raw_design(Eigen::Index n, Eigen::Index p, double k, std::uint64_t seed) {
    if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("k must lie in [0, 1)");
    Rng rng(seed);
    const double innovation = std::sqrt(1.0 - k * k);
    Matrix X(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        double z = rng.normal();
        X(i, 0) = z;
        for (Eigen::Index j = 1; j < p; ++j) {
            z = k * z + innovation * rng.normal();
            X(i, j) = z;
        }
    }
    return X;
}

Matrix generate_design(Eigen::Index n, Eigen::Index p, double k, std::uint64_t seed) {
    Matrix X = generate_raw_design(n, p, k, seed);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double norm = X.col(j).norm();
        if (norm > 0.0) X.col(j) /= norm;
    }
    return X;
}

Coefficients project_row_space(const Matrix& X, const Vector& v) {
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv[0] > 0.0)) {
        throw InvalidArgument("cannot project onto the row space of a zero matrix");
    }
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-10 * sv[0]) ++rank;
    const auto V = svd.matrixV().leftCols(rank);
    return V * (V.transpose() * v);
}

Coefficients generate_beta(const Matrix& X, std::uint64_t seed) {
    Rng rng(seed);
    return project_row_space(X, rng.normal_vector(X.cols()));
}

GaussianNoiseSpec sigma_for_snr(const Matrix& X, const Coefficients& beta_star, double snr) {
    const auto n = X.rows();
    if (n < 2) throw InvalidArgument("signal-to-noise calibration needs n >= 2");
    if (!(snr > 0.0)) throw InvalidArgument("snr must be positive");
    const Vector z = X * beta_star;
    const double sum = z.sum();
    const double sumsq = z.squaredNorm();
    const double centered = sumsq - sum * sum / double(n);
    if (!(centered > 1e-14 * sumsq)) {
        throw InvalidArgument("degenerate signal: linear predictors have no spread");
    }
    return {centered / (snr * double(n - 1))};
}

Vector sample_outcomes(Family family, const Matrix& X, const Coefficients& beta_star,
                       const std::optional<GaussianNoiseSpec>& noise, std::uint64_t seed) {
    if (family == Family::gaussian && !noise) {
        throw InvalidArgument("gaussian outcomes need a noise specification");
    }
    if (family != Family::gaussian && noise) {
        throw InvalidArgument("noise specification applies to the gaussian family only");
    }
    const Vector z = X * beta_star;
    Rng rng(seed);
    Vector y(z.size());
    switch (family) {
    case Family::gaussian: {
        if (!(noise->sigma2 >= 0.0)) throw InvalidArgument("noise variance must be non-negative");
        const double sigma = std::sqrt(noise->sigma2);
        for (Eigen::Index i = 0; i < z.size(); ++i) y[i] = z[i] + sigma * rng.normal();
        break;
    }
    case Family::poisson:
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (z[i] > 30.0) {
                throw InvalidArgument("poisson mean overflow: linear predictor " +
                                      std::to_string(z[i]) + " at row " + std::to_string(i));
            }
            y[i] = rng.poisson(std::exp(z[i]));
        }
        break;
    case Family::bernoulli:
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            y[i] = rng.bernoulli(inverse_link(Family::bernoulli, z[i])) ? 1.0 : 0.0;
        }
        break;
    }
    return y;
}

double relative_prediction_error(const Matrix& X, const Coefficients& beta_hat,
                                 const Coefficients& beta_star) {
    const double denom = (X * beta_star).norm();
    if (!(denom > 0.0)) throw InvalidArgument("relative prediction error: X beta* is zero");
    return (X * (beta_hat - beta_star)).norm() / denom;
}

SimInstance generate_instance(const SimConfig& config, int replication) {
    const std::uint64_t rs = replication_seed(config, replication);
    SimInstance inst;
    inst.data.X = generate_design(config.n, config.p, config.k, derive_seed(rs, design_stream));
    inst.beta_star = generate_beta(inst.data.X, derive_seed(rs, beta_stream));
    if (config.family == Family::gaussian) {
        inst.noise = sigma_for_snr(inst.data.X, inst.beta_star, config.snr);
    }
    inst.data.y = sample_outcomes(config.family, inst.data.X, inst.beta_star, inst.noise,
                                  derive_seed(rs, outcome_stream));
    return inst;
}

Coefficients fit_estimator(Estimator estimator, Family family, const Dataset& data,
                           std::uint64_t cv_seed) {
    switch (estimator) {
    case Estimator::tridge: return tridge_fit(family, data).beta;
    case Estimator::cv5: return kfold_cv_ridge(family, data, {5, {}, cv_seed, {}}).beta;
    case Estimator::cv10: return kfold_cv_ridge(family, data, {10, {}, cv_seed, {}}).beta;
    case Estimator::mle: return fit_ridge(family, data, 0.0).beta;
    }
    throw InvalidArgument("unknown estimator");
}

std::pair<double, double> mean_sd(const std::vector<double>& values) {
    if (values.empty()) return {std::nan(""), std::nan("")};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double m = sum / double(values.size());
    if (values.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / double(values.size() - 1))};
}

SimReport run_experiment(const SimConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const int reps = config.replications;
    const std::size_t n_est = config.estimators.size();

    const auto n_reps = static_cast<std::size_t>(reps);
    std::vector<std::vector<double>> errors(n_reps, std::vector<double>(n_est));
    std::vector<std::string> failure(n_reps);
    std::vector<char> failed(n_reps, 0);

    parallel_for(reps, config.threads > 0 ? config.threads : default_thread_count(), [&](int rep) {
        try {
            const SimInstance inst = generate_instance(config, rep);
            const std::uint64_t cv_seed = derive_seed(replication_seed(config, rep), cv_stream);
            for (std::size_t e = 0; e < n_est; ++e) {
                const Coefficients beta =
                    fit_estimator(config.estimators[e], config.family, inst.data, cv_seed);
                errors[std::size_t(rep)][e] =
                    relative_prediction_error(inst.data.X, beta, inst.beta_star);
            }
        } catch (const Error& ex) {
            failed[std::size_t(rep)] = 1;
            failure[std::size_t(rep)] = ex.what();
        }
    });

    SimReport report;
    report.config = config;
    for (std::size_t e = 0; e < n_est; ++e) {
        report.estimators.push_back({config.estimators[e], 0.0, 0.0, {}});
    }
    for (int rep = 0; rep < reps; ++rep) {
        if (failed[std::size_t(rep)]) {
            report.failed_replications.push_back(rep);
            report.failure_messages.push_back(failure[std::size_t(rep)]);
            continue;
        }
        report.replications_used.push_back(rep);
        for (std::size_t e = 0; e < n_est; ++e) {
            report.estimators[e].errors.push_back(errors[std::size_t(rep)][e]);
        }
    }
    for (auto& est : report.estimators) {
        std::tie(est.mean, est.sd) = mean_sd(est.errors);
    }
    report.valid = double(report.failed_replications.size()) <= 0.05 * double(reps);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<ConvergencePoint> mle_convergence_study(const ConvergenceConfig& config) {
    std::vector<ConvergencePoint> curve;
    for (const Eigen::Index n : config.n_grid) {
        if (n <= config.p) {
            throw InvalidArgument("convergence study needs n > p (n = " + std::to_string(n) + ")");
        }
        ConvergencePoint point{n, 0.0, 0, 0};
        double total = 0.0;
        for (int rep = 0; rep < config.replications; ++rep) {
            std::uint64_t rs = derive_seed(config.seed, std::uint64_t(n));
            rs = derive_seed(rs, std::uint64_t(rep));
            Dataset data;
            data.X = config.normalize_columns
                         ? generate_design(n, config.p, config.k, derive_seed(rs, design_stream))
                         : generate_raw_design(n, config.p, config.k,
                                               derive_seed(rs, design_stream));
            const Coefficients beta_star = generate_beta(data.X, derive_seed(rs, beta_stream));
            std::optional<GaussianNoiseSpec> noise;
            if (config.family == Family::gaussian) {
                noise = sigma_for_snr(data.X, beta_star, config.snr);
            }
            data.y = sample_outcomes(config.family, data.X, beta_star, noise,
                                     derive_seed(rs, outcome_stream));
            Coefficients mle;
            try {
                mle = fit_ridge(config.family, data, 0.0).beta;
            } catch (const Error&) {
                ++point.mle_failures;
                continue;
            }
            const Coefficients tr = tridge_fit(config.family, data).beta;
            total += (tr - mle).norm() / mle.norm();
            ++point.replications_used;
        }
        point.relative_error =
            point.replications_used > 0 ? total / point.replications_used : std::nan("");
        curve.push_back(point);
    }
    return curve;
}

} // namespace tridge
