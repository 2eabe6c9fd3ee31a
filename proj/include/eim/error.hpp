#pragma once

#include <stdexcept>
#include <string>

namespace eim {

// Base for every data/contract failure raised by the library. The CLI maps
// anything deriving from Error to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when activation mass reaches the canvas border band; results would
// otherwise be clipped silently.
class BoundaryOverflowError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace eim
