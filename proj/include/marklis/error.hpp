#pragma once

#include <stdexcept>
#include <string>

namespace marklis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter lies outside the domain of the requested operation
/// (transition probabilities outside [0,1], a chain without a spectral
/// decomposition, a drift experiment on a symmetric chain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A call-site precondition failed (bad index, empty sample, oracle size cap).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violated an internal invariant, e.g. a probability
/// formula produced a value below -1e-15.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace marklis
