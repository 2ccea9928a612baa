// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lrd {

/// Argument outside the mathematical domain of a function (e.g. Γ(x) with x ≤ 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Model or object parameters violate a type invariant.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested combination is well defined but not implemented.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Model is outside the long-range dependent regime.
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares fit has no usable signal.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrand has a non-integrable singularity.
class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circulant embedding produced significantly negative eigenvalues.
class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observation window is not covered by the simulated lattice.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Functional does not satisfy a Hermite-rank precondition.
class RankError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad user input (empty samples, malformed descriptors).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigen-solver or other linear algebra failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrd
