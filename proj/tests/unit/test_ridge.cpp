#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tridge/error.hpp"
#include "tridge/ridge.hpp"

using namespace tridge;

namespace {

Dataset toy() {
    Dataset d;
    d.X = Matrix::Identity(2, 2);
    d.y = Vector(2);
    d.y << 1.0, 2.0;
    return d;
}

constexpr Family kFamilies[] = {Family::gaussian, Family::poisson, Family::bernoulli};

double kkt(Family f, const Dataset& d, const RidgeSolution& s) {
    return (oracle::score(f, d, s.beta) - 2.0 * s.r * s.beta).norm();
}

} // namespace

TEST_CASE("closed-form toy") {
    const RidgeSolution s = fit_ridge(Family::gaussian, toy(), 0.5);
    CHECK(s.beta[0] == doctest::Approx(0.5));
    CHECK(s.beta[1] == doctest::Approx(1.0));
    CHECK(s.r == 0.5);
    CHECK(s.kkt_residual <= 1e-12);
}

TEST_CASE("huge penalty collapses the solution") {
    std::mt19937_64 gen(1);
    for (Eigen::Index p : {4, 12}) {
        const Dataset d = oracle::random_dataset(Family::gaussian, 8, p, gen);
        const RidgeSolution s = fit_ridge(Family::gaussian, d, 1e10);
        CHECK(s.beta.norm() <= 1e-6 * (d.X.transpose() * d.y).norm());
    }
}

TEST_CASE("poisson scalar example has the exact zero solution") {
    Dataset d;
    d.X = Matrix::Ones(1, 1);
    d.y = Vector::Ones(1);
    const RidgeSolution s = fit_ridge(Family::poisson, d, 0.5);
    CHECK(std::abs(s.beta[0]) <= 1e-12);
}

TEST_CASE("unpenalized fits") {
    std::mt19937_64 gen(2);
    const Dataset d = oracle::random_dataset(Family::gaussian, 10, 3, gen);
    const RidgeSolution s = fit_ridge(Family::gaussian, d, 0.0);
    CHECK(oracle::rel_err(s.beta, oracle::gaussian_ridge(d, 0.0)) <= 1e-10);

    const Dataset wide = oracle::random_dataset(Family::gaussian, 3, 5, gen);
    CHECK_THROWS_AS(fit_ridge(Family::gaussian, wide, 0.0), SingularSystem);
    CHECK_THROWS_AS(fit_ridge(Family::poisson, oracle::random_dataset(Family::poisson, 3, 5, gen), 0.0),
                    SingularSystem);

    Dataset collinear = d;
    collinear.X.col(2) = collinear.X.col(1);
    CHECK_THROWS_AS(fit_ridge(Family::gaussian, collinear, 0.0), SingularSystem);
    CHECK_THROWS_AS(fit_ridge(Family::gaussian, d, -1.0), InvalidArgument);
}

TEST_CASE("ridge path examples") {
    const std::vector<double> one{0.5};
    const RidgePath path = ridge_path(Family::gaussian, toy(), one);
    REQUIRE(path.entries.size() == 1);
    CHECK(path.entries[0].lambda_edr == doctest::Approx(2 * 0.5 * std::sqrt(1.25)));

    CHECK(ridge_path(Family::gaussian, toy(), std::vector<double>{}).entries.empty());
    CHECK_THROWS_AS(ridge_path(Family::gaussian, toy(), std::vector<double>{0.1, 0.1}),
                    InvalidArgument);
    CHECK_THROWS_AS(ridge_path(Family::poisson, toy(), std::vector<double>{0.3, 0.2}),
                    InvalidArgument);
    CHECK_THROWS_AS(ridge_path(Family::gaussian, toy(), std::vector<double>{-1.0, 1.0}),
                    InvalidArgument);
}

TEST_CASE("path failures carry the grid index") {
    std::mt19937_64 gen(3);
    const Dataset wide = oracle::random_dataset(Family::gaussian, 3, 6, gen);
    try {
        ridge_path(Family::gaussian, wide, std::vector<double>{0.0, 1.0});
        FAIL("expected PathPointFailure");
    } catch (const PathPointFailure& e) {
        CHECK(e.index == 0);
    }
}

TEST_CASE("edr examples") {
    const RidgeSolution s = edr_fit(Family::gaussian, toy(), std::sqrt(1.25));
    CHECK(s.beta[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.beta[1] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.r == doctest::Approx(0.5).epsilon(1e-8));

    for (double lambda : {std::sqrt(5.0), 10.0}) {
        const RidgeSolution z = edr_fit(Family::gaussian, toy(), lambda);
        CHECK(z.beta.norm() == 0.0);
        CHECK(std::isinf(z.r));
    }
    CHECK_THROWS_AS(edr_fit(Family::gaussian, toy(), 0.0), InvalidArgument);
}

TEST_CASE("edr bracket failure is reported") {
    EdrOptions narrow;
    narrow.r_hi_max = 1e-3;
    narrow.r_hi_start = 1e-4;
    // lambda(1e-3) on the toy is far below 2.2.
    CHECK_THROWS_AS(edr_fit(Family::gaussian, toy(), 2.2, narrow), BracketFailure);
}

TEST_CASE("property: KKT identity and score-lambda identity") {
    std::mt19937_64 gen(4);
    for (Family f : kFamilies) {
        for (int trial = 0; trial < 15; ++trial) {
            const Eigen::Index n = std::uniform_int_distribution<int>(3, 12)(gen);
            const Eigen::Index p = std::uniform_int_distribution<int>(1, 12)(gen);
            const Dataset d = oracle::random_dataset(f, n, p, gen);
            const double r = std::exp(std::uniform_real_distribution<double>(-4.0, 3.0)(gen));
            const RidgeSolver solver(f, d);
            const RidgeSolution s = solver.solve(r);
            CHECK(s.kkt_residual <= solver.tol_kkt());
            CHECK(kkt(f, d, s) <= solver.tol_kkt() * 1.0001 + 1e-14);
            const double lambda = 2.0 * r * s.beta.norm();
            CHECK(oracle::score(f, d, s.beta).norm() ==
                  doctest::Approx(lambda).epsilon(1e-6).scale(solver.tol_kkt()));
        }
    }
}

TEST_CASE("property: ridge to edr round trip") {
    std::mt19937_64 gen(5);
    for (Family f : kFamilies) {
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::Index n = std::uniform_int_distribution<int>(3, 12)(gen);
            const Eigen::Index p = std::uniform_int_distribution<int>(1, 12)(gen);
            const Dataset d = oracle::random_dataset(f, n, p, gen);
            const double r = std::exp(std::uniform_real_distribution<double>(-3.0, 2.0)(gen));
            const RidgeSolution ridge = fit_ridge(f, d, r);
            const double lambda = 2.0 * r * ridge.beta.norm();
            if (!(lambda > 0.0)) continue;
            const RidgeSolution edr = edr_fit(f, d, lambda);
            CHECK((edr.beta - ridge.beta).norm() <= 1e-5);
            CHECK(std::abs(oracle::score(f, d, edr.beta).norm() - lambda) <= 1e-6);
        }
    }
}

TEST_CASE("property: Newton matches the Gaussian closed form") {
    std::mt19937_64 gen(6);
    RidgeOptions newton;
    newton.force_newton = true;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = std::uniform_int_distribution<int>(3, 12)(gen);
        const Eigen::Index p = std::uniform_int_distribution<int>(1, 12)(gen);
        const Dataset d = oracle::random_dataset(Family::gaussian, n, p, gen);
        const double r = std::exp(std::uniform_real_distribution<double>(-4.0, 3.0)(gen));
        const Vector closed = oracle::gaussian_ridge(d, r);
        const RidgeSolution spectral = fit_ridge(Family::gaussian, d, r);
        const RidgeSolution iterative = fit_ridge(Family::gaussian, d, r, std::nullopt, newton);
        CHECK(oracle::rel_err(spectral.beta, closed) <= 1e-8);
        CHECK(oracle::rel_err(iterative.beta, closed) <= 1e-8);
    }
}

TEST_CASE("property: GLM solver agrees with an independent Newton oracle") {
    std::mt19937_64 gen(7);
    for (Family f : {Family::poisson, Family::bernoulli}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::Index n = std::uniform_int_distribution<int>(3, 10)(gen);
            const Eigen::Index p = std::uniform_int_distribution<int>(1, 10)(gen);
            const Dataset d = oracle::random_dataset(f, n, p, gen);
            const double r = std::exp(std::uniform_real_distribution<double>(-3.0, 2.0)(gen));
            CHECK(oracle::rel_err(fit_ridge(f, d, r).beta, oracle::newton_ridge(f, d, r)) <= 1e-7);
        }
    }
}

TEST_CASE("property: Gaussian shrinkage is monotone along the path") {
    std::mt19937_64 gen(8);
    std::vector<double> grid;
    for (int i = 0; i < 60; ++i) grid.push_back(std::pow(10.0, -4.0 + 8.0 * i / 59.0));
    for (Eigen::Index p : {5, 15}) {
        const Dataset d = oracle::random_dataset(Family::gaussian, 10, p, gen);
        const RidgePath path = ridge_path(Family::gaussian, d, grid);
        for (std::size_t i = 1; i < path.entries.size(); ++i) {
            CHECK(path.entries[i].solution.beta.norm() <=
                  path.entries[i - 1].solution.beta.norm() * (1 + 1e-12));
            CHECK(path.entries[i].lambda_edr >= 0.0);
            CHECK(path.entries[i].r > path.entries[i - 1].r);
        }
    }
}

TEST_CASE("warm starts do not change the solution") {
    std::mt19937_64 gen(9);
    for (Family f : {Family::poisson, Family::bernoulli}) {
        for (Eigen::Index p : {4, 14}) {
            const Dataset d = oracle::random_dataset(f, 8, p, gen);
            const RidgeSolver solver(f, d);
            const RidgeSolution cold = solver.solve(0.3);
            const RidgeSolution near = solver.solve(0.2);
            const RidgeSolution warm = solver.solve(0.3, &near);
            CHECK((cold.beta - warm.beta).norm() <= 1e-7);
            const RidgeSolution primal_warm = fit_ridge(f, d, 0.3, near.beta);
            CHECK((cold.beta - primal_warm.beta).norm() <= 1e-7);
        }
    }
}

TEST_CASE("high-dimensional GLM ridge uses consistent kernel and primal forms") {
    std::mt19937_64 gen(10);
    for (Family f : {Family::poisson, Family::bernoulli}) {
        const Dataset d = oracle::random_dataset(f, 6, 20, gen);
        const RidgeSolution s = fit_ridge(f, d, 0.7);
        CHECK(oracle::rel_err(s.beta, oracle::newton_ridge(f, d, 0.7)) <= 1e-7);
    }
}

TEST_CASE("bad dimensions are rejected") {
    Dataset d = toy();
    d.y = Vector::Zero(3);
    CHECK_THROWS(fit_ridge(Family::gaussian, d, 1.0));
    const RidgeSolver solver(Family::gaussian, toy());
    RidgeSolution bad;
    bad.beta = Vector::Zero(5);
    CHECK_THROWS_AS(solver.solve(1.0, &bad), DimensionMismatch);
}
