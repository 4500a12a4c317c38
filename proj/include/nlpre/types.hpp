// Common dense types and the error hierarchy used across the library.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nlpre {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using VecI = Eigen::VectorXi;
using Eigen::Index;

/// Base class for all recoverable failures raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter-change inverse hit a zero denominator. Carries the name of the
/// offending coordinate so adaptive loops can report which component froze.
class SingularInverseError : public Error {
public:
    SingularInverseError(const std::string& map_name, const std::string& coordinate)
        : Error(map_name + ": inverse undefined, " + coordinate + " is zero"),
          coordinate_(coordinate) {}

    const std::string& coordinate() const { return coordinate_; }

private:
    std::string coordinate_;
};

/// Estimator gain combination violates the admissibility conditions.
class GainError : public Error {
public:
    using Error::Error;
};

/// Bad scenario configuration (unknown key, malformed value, missing scenario).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite state encountered while integrating; carries the step index.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, long step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    long step() const { return step_; }

private:
    long step_ = -1;
};

}  // namespace nlpre
