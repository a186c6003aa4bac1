#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sces {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Error hierarchy. Construction or configuration problems derive from
// ConfigError; conditions that can legitimately occur mid-run derive from
// RuntimeError so callers can map them to distinct exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct RuntimeError : Error {
  using Error::Error;
};

struct InfeasibleStart : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct NonFiniteObjective : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct AllInfeasible : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct WeightError : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct DegenerateSampler : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct DomainError : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct SizeError : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct EvaluationError : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct InsufficientSeeds : RuntimeError {
  using RuntimeError::RuntimeError;
};
struct IOError : RuntimeError {
  using RuntimeError::RuntimeError;
};

}  // namespace sces
