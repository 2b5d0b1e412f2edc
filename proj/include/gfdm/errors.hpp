#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfdm {

// Plain argument/shape violations are reported as std::invalid_argument.
// The types below carry a payload the caller may want to inspect.

/// Modulation matrix too ill-conditioned to invert (ZF receiver, custom precoder).
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number_(condition_number) {}

    double condition_number() const noexcept { return condition_number_; }

private:
    double condition_number_;
};

/// ZF equalization hit a channel bin with (numerically) zero response.
class SpectralNullError : public std::runtime_error {
public:
    SpectralNullError(const std::string& what, std::size_t bin)
        : std::runtime_error(what), bin_(bin) {}

    std::size_t bin() const noexcept { return bin_; }

private:
    std::size_t bin_;
};

/// A closed-form count (log2 based) was requested for a size it does not cover.
class UnsupportedSizeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace gfdm
