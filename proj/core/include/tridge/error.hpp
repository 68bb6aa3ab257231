#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tridge {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Input data violates a dataset invariant. `row`/`column` are 0-based,
/// -1 when not applicable.
class InvalidData : public Error {
public:
    InvalidData(const std::string& what, long row = -1, long column = -1)
        : Error(what), row(row), column(column) {}
    long row;
    long column;
};

/// The score norm fell below the scale-aware zero threshold, so the
/// t-ridge objective is undefined at the evaluated point.
class VanishingScore : public Error {
public:
    VanishingScore(const std::string& what, double score_norm)
        : Error(what), score_norm(score_norm) {}
    double score_norm;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, Eigen::VectorXd last_iterate,
                   double residual, int iterations)
        : Error(what),
          last_iterate(std::move(last_iterate)),
          residual(residual),
          iterations(iterations) {}
    Eigen::VectorXd last_iterate;
    double residual;
    int iterations;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class BracketFailure : public Error {
public:
    using Error::Error;
};

class AllGridFailed : public Error {
public:
    using Error::Error;
};

/// A ridge path point failed; wraps the original message with its grid index.
class PathPointFailure : public Error {
public:
    PathPointFailure(const std::string& what, std::size_t index)
        : Error(what), index(index) {}
    std::size_t index;
};

} // namespace tridge
