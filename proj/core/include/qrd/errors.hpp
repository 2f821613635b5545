#pragma once

#include <stdexcept>
#include <string>

namespace qrd {

/// Base class for all qrd errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible operator/state/factor dimensions.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Malformed input files or strings (JSON, CSV, grid specs).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// An object failed its declared invariants (non-Hermitian density matrix,
/// non-trace-preserving Kraus set, unnormalized probabilities, ...).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A numerical consistency check failed beyond tolerance (cross-form
/// disagreement, results outside their mathematically valid range).
class NumericError : public Error {
public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

}  // namespace qrd
