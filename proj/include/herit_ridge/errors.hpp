#ifndef HERIT_RIDGE_ERRORS_HPP
#define HERIT_RIDGE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace heritridge {

// Base of all toolkit errors. User-facing commands map these to exit code 1,
// except NumericalError subclasses which map to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ZeroVarianceColumn : public Error {
 public:
  explicit ZeroVarianceColumn(std::int64_t column)
      : Error("column " + std::to_string(column) + " has zero variance (monomorphic variant)"),
        column_(column) {}
  std::int64_t column() const { return column_; }

 private:
  std::int64_t column_;
};

class NonPositiveSd : public Error {
 public:
  explicit NonPositiveSd(std::int64_t column)
      : Error("standardization sd for column " + std::to_string(column) + " is not positive"),
        column_(column) {}
  std::int64_t column() const { return column_; }

 private:
  std::int64_t column_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConstantNullEigenvector : public Error {
 public:
  using Error::Error;
};

class RankDeficientCovariates : public Error {
 public:
  using Error::Error;
};

class BadMagic : public Error {
 public:
  using Error::Error;
};

class TruncatedPayload : public Error {
 public:
  using Error::Error;
};

class InconsistentDimensions : public Error {
 public:
  using Error::Error;
};

class HatDiagonalOne : public NumericalError {
 public:
  explicit HatDiagonalOne(std::int64_t row)
      : NumericalError("hat-matrix diagonal at row " + std::to_string(row) +
                       " reaches 1 (lambda too small for these data)"),
        row_(row) {}
  std::int64_t row() const { return row_; }

 private:
  std::int64_t row_;
};

class FoldTooSmall : public Error {
 public:
  using Error::Error;
};

class StandardizationSetTooSmall : public Error {
 public:
  using Error::Error;
};

class NoCausalVariants : public Error {
 public:
  using Error::Error;
};

class InvalidInversion : public Error {
 public:
  using Error::Error;
};

class EmptyCurve : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace heritridge

#endif  // HERIT_RIDGE_ERRORS_HPP
