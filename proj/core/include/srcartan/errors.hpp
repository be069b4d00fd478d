#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace srcartan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Numeric evaluation left the domain of an expression (x/0, sqrt(-1), ...).
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<double> point);
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

/// eta ^ (d eta)^n vanishes, or a skew form that must be symplectic is not.
class ContactDegeneracy : public Error {
 public:
  using Error::Error;
};

/// Geometric input that is not degenerate in the contact sense but still
/// unusable: indefinite metric, singular coframe, non-immersive map.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Input document does not match the expected layout.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violates an invariant the algorithm guarantees.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace srcartan
