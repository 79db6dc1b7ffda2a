#pragma once

#include <stdexcept>
#include <string>

namespace qst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: dimension mismatch, parameter out of range.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Spectral function evaluated outside its domain (e.g. log of a singular matrix).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Eigensolver did not reach its off-diagonal threshold within the sweep cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class TraceError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Noise model incompatible with the state/basis (e.g. invalid binary probabilities).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration rejected before any work is done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qst
