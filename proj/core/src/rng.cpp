#include "tridge/rng.hpp"

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace tridge {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
    return splitmix64(parent ^ splitmix64(stream + 1));
}

double Rng::normal() {
    boost::random::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index size) {
    boost::random::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd out(size);
    for (Eigen::Index i = 0; i < size; ++i) out[i] = dist(engine_);
    return out;
}

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    boost::random::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    return dist(engine_);
}

double Rng::poisson(double mean) {
    if (mean <= 0.0) return 0.0;
    boost::random::poisson_distribution<long, double> dist(mean);
    return double(dist(engine_));
}

bool Rng::bernoulli(double prob) {
    boost::random::bernoulli_distribution<double> dist(prob);
    return dist(engine_);
}

} // namespace tridge
