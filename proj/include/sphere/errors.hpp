#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace sphere {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters or unknown registry names (CLI exit code 1).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed input data: invalid edges, unparsable files (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of iterations (CLI exit code 3).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate)
        : Error(what), last_iterate_(std::move(last_iterate)) {}

    const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

private:
    Eigen::VectorXd last_iterate_;
};

}  // namespace sphere
