#pragma once

#include <stdexcept>
#include <string>

namespace fvem {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public Error {
public:
    using Error::Error;
};

class LocationError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Raised when the explicit scheme blows up (non-finite or runaway values).
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long step, double max_magnitude)
        : Error(what), step_(step), max_magnitude_(max_magnitude) {}

    long step() const noexcept { return step_; }
    double max_magnitude() const noexcept { return max_magnitude_; }

private:
    long step_;
    double max_magnitude_;
};

} // namespace fvem
