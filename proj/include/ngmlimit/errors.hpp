#ifndef NGMLIMIT_ERRORS_HPP
#define NGMLIMIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ngmlimit {

/// Malformed arguments: bad dimensions, indices out of range, non-finite or
/// non-positive parameters.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pivot fell below the singularity threshold.
class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix(const std::string& what, double pivot)
        : std::runtime_error(what + " (pivot magnitude " + std::to_string(pivot) + ")"),
          pivot_(pivot) {}

    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

/// An iterative procedure failed to converge, or a limit could not be
/// evaluated at any schedule point.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace ngmlimit

#endif  // NGMLIMIT_ERRORS_HPP
