#pragma once

#include <stdexcept>
#include <string>

namespace zzbwave {

// Bad user-supplied argument (sizes, ranges, unreadable input).
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Spectrum with no usable power (all-zero PSD, beta = 0).
class DegenerateSpectrumError : public std::runtime_error {
public:
    explicit DegenerateSpectrumError(const std::string& msg) : std::runtime_error(msg) {}
};

// Covariance factorization failed even after diagonal jitter.
class CovarianceError : public std::runtime_error {
public:
    CovarianceError(const std::string& msg, int minor_index)
        : std::runtime_error(msg), minor_index(minor_index) {}
    int minor_index;
};

// Non-finite value or other irrecoverable numerical failure.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace zzbwave
