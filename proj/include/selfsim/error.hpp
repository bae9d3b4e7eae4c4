#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

// Every failure raised by the library derives from Error so that callers (the
// CLI in particular) can map it onto an exit code with a single handler.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (log of a
// non-positive number, ratio outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, word, certificate or other user-supplied data.
class InputError : public Error {
 public:
  using Error::Error;
};

// An enclosure is too wide to decide a comparison; retrying at higher
// precision may succeed.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace selfsim
