#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subconv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model or algorithm parameters (bad lag, lambda <= 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value left the declared rectangular domain.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A map produced inf or NaN (typically exponential overflow).
class NonFiniteError : public Error {
public:
    NonFiniteError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The sublinearity hypothesis fails near the origin, so no threshold exists.
class CriterionInapplicable : public Error {
public:
    using Error::Error;
};

/// A bounding function failed validation (g(0) != 0, negative values, ...).
class BoundValidationError : public Error {
public:
    using Error::Error;
};

/// A planar system has no solvability form for its first map.
class MissingSolvabilityForm : public Error {
public:
    using Error::Error;
};

/// Envelope bounds required by an applicability check were not supplied.
class MissingEnvelope : public Error {
public:
    using Error::Error;
};

/// Malformed experiment configuration or model descriptor.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace subconv
