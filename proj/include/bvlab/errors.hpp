#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bvlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A distance table failed validation; row()/col() name the offending cell.
class InvalidTable : public Error {
 public:
  InvalidTable(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class AsymmetricTable : public InvalidTable {
 public:
  AsymmetricTable(std::size_t i, std::size_t j)
      : InvalidTable("asymmetric table at (" + std::to_string(i) + ", " + std::to_string(j) + ")", i, j) {}
};

class NegativeDistance : public InvalidTable {
 public:
  NegativeDistance(std::size_t i, std::size_t j)
      : InvalidTable("negative distance at (" + std::to_string(i) + ", " + std::to_string(j) + ")", i, j) {}
};

class ZeroOffDiagonal : public InvalidTable {
 public:
  ZeroOffDiagonal(std::size_t i, std::size_t j)
      : InvalidTable("zero distance between distinct points at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")",
                     i, j) {}
};

class NonzeroDiagonal : public InvalidTable {
 public:
  explicit NonzeroDiagonal(std::size_t i)
      : InvalidTable("nonzero self-distance at (" + std::to_string(i) + ", " + std::to_string(i) + ")", i, i) {}
};

/// Error that names a single point by label.
class PointError : public Error {
 public:
  PointError(const std::string& prefix, std::string label)
      : Error(prefix + ": " + label), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class PointNotInCarrier : public PointError {
 public:
  explicit PointNotInCarrier(std::string label) : PointError("point not in carrier", std::move(label)) {}
};

class ImageEscapesSample : public PointError {
 public:
  explicit ImageEscapesSample(std::string label)
      : PointError("image leaves the finite sample, enlarge it; preimage", std::move(label)) {}
};

class NoAdmissibleIndex : public PointError {
 public:
  explicit NoAdmissibleIndex(std::string label)
      : PointError("no admissible index in the recorded prefix (extend the seed) for", std::move(label)) {}
};

class ZeroDistanceToRange : public PointError {
 public:
  explicit ZeroDistanceToRange(std::string label)
      : PointError("distance to the sequence range is zero (the seed converges) at", std::move(label)) {}
};

/// A generated distance rule broke symmetry, positivity or zero-self on an evaluated pair.
class LazyAxiomViolation : public Error {
 public:
  LazyAxiomViolation(const std::string& p, const std::string& q, const std::string& why)
      : Error("distance axiom violated at (" + p + ", " + q + "): " + why) {}
};

class EmptySelector : public Error {
 public:
  EmptySelector() : Error("empty selector") {}
};

class NoClauseMatches : public Error {
 public:
  explicit NoClauseMatches(const std::string& where) : Error("no clause matches " + where) {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& where) : Error("division by zero evaluating " + where) {}
};

class OrbitTooShort : public Error {
 public:
  using Error::Error;
};

class UnknownExample : public Error {
 public:
  explicit UnknownExample(const std::string& name) : Error("unknown example: " + name) {}
};

class InvalidCertificate : public Error {
 public:
  using Error::Error;
};

}  // namespace bvlab
