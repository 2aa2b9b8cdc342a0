#pragma once

#include <stdexcept>
#include <string>

namespace furry {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by caller input (bad sizes, out-of-range coupling, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computation could not be carried out reliably: gap loss, singular
// leading coefficient, unconverged quadrature, under-resolved transforms.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace furry
