#pragma once

#include <stdexcept>
#include <string>

namespace bmcp {

// Root of every error the library throws. The subclasses separate the
// failure classes the command-line front end maps to distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated (bad argument, too few points, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input data could not be read or parsed.
class DataError : public Error {
 public:
  using Error::Error;
};

// A moment triple lies outside the domain of the requested map, or a
// statistic had no admissible split point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A numerical solve did not bracket or did not converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace bmcp
