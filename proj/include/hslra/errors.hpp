#pragma once

#include <stdexcept>
#include <string>

namespace hslra {

// Bad user input: dimensions, ranges, malformed config.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical routine failed (factorization breakdown, degenerate system).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// The observed singular-value gap does not match the requested rank.
class RankMismatchError : public std::runtime_error {
public:
    RankMismatchError(const std::string& msg, double sigma_d, double sigma_d1)
        : std::runtime_error(msg), sigma_at_rank(sigma_d), sigma_after_rank(sigma_d1) {}
    double sigma_at_rank;
    double sigma_after_rank;
};

// Recurrence has a (near-)zero trailing coefficient: the series cannot be
// continued forward.
class NonContinuableError : public std::runtime_error {
public:
    explicit NonContinuableError(const std::string& msg) : std::runtime_error(msg) {}
};

// File system / parsing failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hslra
