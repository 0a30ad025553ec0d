#pragma once

#include <stdexcept>
#include <string>

namespace ipvem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh construction or validation failure (topology, orientation, degeneracy).
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh payload; carries the 1-based line the parser stopped at.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Requested polynomial order is outside what the pipeline implements.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A local or global linear system could not be factorized.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class SolveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ipvem
