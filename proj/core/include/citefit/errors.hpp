#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace citefit {

/// Root of every exception thrown by citefit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or arguments. The CLI reports these with exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation could not produce a usable number. The CLI reports these
/// with exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

class EmptySample : public InputError {
 public:
  EmptySample() : InputError("sample is empty") {}
  using InputError::InputError;
};

class InvalidWeights : public InputError {
 public:
  using InputError::InputError;
};

class TooFewReps : public InputError {
 public:
  using InputError::InputError;
};

class OffsetError : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MomentUndefined : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitFailed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IdenticalModels : public NumericalError {
 public:
  IdenticalModels()
      : NumericalError("log-likelihood differences have zero variance") {}
};

class AllStatisticsFailed : public NumericalError {
 public:
  AllStatisticsFailed()
      : NumericalError("statistic failed on every bootstrap replicate") {}
};

}  // namespace citefit
