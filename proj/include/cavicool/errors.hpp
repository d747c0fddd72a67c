#pragma once

#include <stdexcept>
#include <string>

namespace cavicool {

// Base for every failure raised by the library. Each subclass corresponds to
// one documented failure mode so callers can mask or report it per point.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

// |f(x)| fell below the singularity guard; the first-order treatment in the
// Rabi frequency does not hold there.
class NearSingularDenominator : public Error {
 public:
  using Error::Error;
};

class HeatingRegime : public Error {
 public:
  using Error::Error;
};

class TruncationExceeded : public Error {
 public:
  using Error::Error;
};

class NonFiniteRates : public Error {
 public:
  using Error::Error;
};

class PoleAtDelta : public Error {
 public:
  using Error::Error;
};

class NoRootsFound : public Error {
 public:
  using Error::Error;
};

class UndefinedPhi : public Error {
 public:
  using Error::Error;
};

class SingularResolvent : public Error {
 public:
  using Error::Error;
};

}  // namespace cavicool
