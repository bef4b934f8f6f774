#ifndef DXXZ_ERRORS_HPP
#define DXXZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dxxz {

// Error categories map onto CLI exit codes: invalid input / parse -> 2,
// accuracy -> 3, resource -> 4. Everything derives from Error so callers
// can catch the whole family at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedLattice : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

// Internal consistency violated (e.g. density-matrix eigenvalue < -1e-9):
// indicates a bug, not a tolerance issue.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dxxz

#endif
