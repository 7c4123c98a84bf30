#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation needs pairwise distinct frequencies.
class DegenerateFrequencies : public Error {
 public:
  using Error::Error;
};

/// Only fourth order (n = 2) structures are defined for this operation.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A Hamiltonian weight has a vanishing denominator.
class DegeneratePairing : public Error {
 public:
  using Error::Error;
};

class NoUniqueCoefficients : public Error {
 public:
  NoUniqueCoefficients(const std::string& what, std::size_t null_dim)
      : Error(what), null_dim_(null_dim) {}
  std::size_t null_space_dimension() const noexcept { return null_dim_; }

 private:
  std::size_t null_dim_;
};

/// The tensor has no mode-commutator realization in the given basis.
class InconsistentQuantization : public Error {
 public:
  InconsistentQuantization(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class Divergence : public Error {
 public:
  Divergence(const std::string& what, std::size_t step) : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Linear solve that should never be singular turned out to be.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace pu
