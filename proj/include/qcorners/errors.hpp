#pragma once

#include <stdexcept>
#include <string>

namespace qcorners {

/// Malformed descriptor, out-of-range parameter or mismatched dimensions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A desk-scale resource cap (group order, enumeration size) would be exceeded.
class CapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Floating-point work failed its own validation (degree rounding, negative
/// box-norm powers beyond noise).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed invariant disagreed with an independent cross-check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcorners
