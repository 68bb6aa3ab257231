#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace tridge {

/// SplitMix64 finalizer. Child seeds are derived as
/// derive_seed(parent, stream) = splitmix64(parent ^ splitmix64(stream + 1)),
/// which gives independent, order-free streams per (cell, replication, purpose).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

/// Random source used across the library: std::mt19937_64 (fully specified
/// by the standard) driving Boost.Random distributions, whose algorithms do
/// not vary between standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal();
    Eigen::VectorXd normal_vector(Eigen::Index size);
    /// Uniform integer in [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
    double poisson(double mean);
    bool bernoulli(double prob);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace tridge
