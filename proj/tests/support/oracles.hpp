#pragma once

// Reference computations used as test oracles. Everything here is written
// from the textbook definitions and shares no code path with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tridge/glm.hpp"

namespace oracle {

using tridge::Dataset;
using tridge::Family;
using tridge::Matrix;
using tridge::Vector;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                            double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(gen);
    return m;
}

inline Vector random_vector(Eigen::Index n, std::mt19937_64& gen, double scale = 1.0) {
    return random_matrix(n, 1, gen, scale).col(0);
}

inline double b(Family f, double z) {
    switch (f) {
    case Family::gaussian: return 0.5 * z * z;
    case Family::poisson: return std::exp(z);
    case Family::bernoulli: return std::log1p(std::exp(z));
    }
    return 0.0;
}

inline double db(Family f, double z) {
    switch (f) {
    case Family::gaussian: return z;
    case Family::poisson: return std::exp(z);
    case Family::bernoulli: return 1.0 / (1.0 + std::exp(-z));
    }
    return 0.0;
}

inline double d2b(Family f, double z) {
    switch (f) {
    case Family::gaussian: return 1.0;
    case Family::poisson: return std::exp(z);
    case Family::bernoulli: {
        const double m = 1.0 / (1.0 + std::exp(-z));
        return m * (1.0 - m);
    }
    }
    return 0.0;
}

/// Random dataset with outcomes drawn from the family at coefficients of
/// norm about `signal`.
inline Dataset random_dataset(Family f, Eigen::Index n, Eigen::Index p, std::mt19937_64& gen,
                              double signal = 1.0) {
    Dataset d;
    d.X = random_matrix(n, p, gen, 1.0 / std::sqrt(double(p)));
    Vector beta = random_vector(p, gen);
    beta *= signal / std::max(beta.norm(), 1e-12);
    const Vector eta = d.X * beta;
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        switch (f) {
        case Family::gaussian: {
            std::normal_distribution<double> nd(eta[i], 0.5);
            d.y[i] = nd(gen);
            break;
        }
        case Family::poisson: {
            std::poisson_distribution<int> pd(std::exp(eta[i]));
            d.y[i] = pd(gen);
            break;
        }
        case Family::bernoulli: {
            std::bernoulli_distribution bd(db(f, eta[i]));
            d.y[i] = bd(gen) ? 1.0 : 0.0;
            break;
        }
        }
    }
    if (f == Family::bernoulli) {
        // Keep both classes present.
        d.y[0] = 0.0;
        d.y[n - 1] = 1.0;
    }
    return d;
}

inline double loss(Family f, const Dataset& d, const Vector& beta) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        const double z = d.X.row(i).dot(beta);
        total += b(f, z) - d.y[i] * z;
    }
    return total;
}

inline Vector score(Family f, const Dataset& d, const Vector& beta) {
    Vector s = Vector::Zero(d.p());
    for (Eigen::Index i = 0; i < d.n(); ++i) {
        const double z = d.X.row(i).dot(beta);
        s += d.X.row(i).transpose() * (d.y[i] - db(f, z));
    }
    return s;
}

inline double tridge_objective(Family f, const Dataset& d, const Vector& beta) {
    return oracle::loss(f, d, beta) / oracle::score(f, d, beta).norm() + beta.norm();
}

/// Central finite-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x,
                          double h = 1e-6) {
    Vector g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vector a = x, c = x;
        a[j] += h;
        c[j] -= h;
        g[j] = (fn(a) - fn(c)) / (2.0 * h);
    }
    return g;
}

inline double rel_err(const Vector& a, const Vector& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

/// (X^T X + 2r I)^{-1} X^T y by a direct LDLT solve.
inline Vector gaussian_ridge(const Dataset& d, double r) {
    Matrix A = d.X.transpose() * d.X;
    A.diagonal().array() += 2.0 * r;
    return A.ldlt().solve(d.X.transpose() * d.y);
}

/// Penalized Newton without warm starts or damping subtleties: plain
/// gradient-norm stopping and fixed step halving on the penalized loss.
inline Vector newton_ridge(Family f, const Dataset& d, double r, int iters = 200) {
    Vector beta = Vector::Zero(d.p());
    auto objective = [&](const Vector& x) { return oracle::loss(f, d, x) + r * x.squaredNorm(); };
    for (int it = 0; it < iters; ++it) {
        const Vector grad = -oracle::score(f, d, beta) + 2.0 * r * beta;
        if (grad.norm() < 1e-13 * std::max(1.0, (d.X.transpose() * d.y).norm())) break;
        Matrix H = Matrix::Zero(d.p(), d.p());
        for (Eigen::Index i = 0; i < d.n(); ++i) {
            const double w = d2b(f, d.X.row(i).dot(beta));
            H += w * d.X.row(i).transpose() * d.X.row(i);
        }
        H.diagonal().array() += 2.0 * r;
        const Vector step = H.ldlt().solve(grad);
        double t = 1.0;
        const double f0 = objective(beta);
        while (t > 1e-12 && objective(beta - t * step) > f0) t *= 0.5;
        beta -= t * step;
    }
    return beta;
}

/// Brute-force t-ridge minimum over an explicit set of r values.
struct GridMinimum {
    double r = 0.0;
    double objective = std::numeric_limits<double>::infinity();
};

template <class Solve>
GridMinimum grid_minimum(Family f, const Dataset& d, const std::vector<double>& rs, Solve solve) {
    GridMinimum best;
    for (double r : rs) {
        const Vector beta = solve(r);
        const double obj = oracle::tridge_objective(f, d, beta);
        if (std::isfinite(obj) && obj < best.objective) best = {r, obj};
    }
    return best;
}

inline std::vector<double> linspace(double a, double b, int points) {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = a + (b - a) * i / (points - 1);
    return v;
}

} // namespace oracle
