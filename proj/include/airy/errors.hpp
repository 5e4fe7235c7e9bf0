#pragma once

#include <stdexcept>
#include <string>

namespace airy {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside the parametric domain [0,1]^2.
class DomainError : public Error {
public:
  using Error::Error;
};

// Invalid knot vectors, degrees, or net sizes.
class DiscretizationError : public Error {
public:
  using Error::Error;
};

// Degenerate or non-invertible geometric mappings.
class MappingError : public Error {
public:
  using Error::Error;
};

// Non-positive-definite or otherwise invalid material data.
class MaterialError : public Error {
public:
  using Error::Error;
};

// Ill-posed boundary-condition specifications.
class ConstraintError : public Error {
public:
  using Error::Error;
};

// Failures in the algebraic solve stages.
class SolverError : public Error {
public:
  using Error::Error;
};

// Malformed configuration files.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Filesystem failures during export.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace airy
