#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tradeshock {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose shapes or world dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A block matrix that violates its structural or value invariants.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Singular, non-convergent or economically inconsistent linear systems.
class SolveError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// Missing or unreadable files, malformed CSV framing.
class IoError : public Error {
 public:
  using Error::Error;
};

/// One violated check found while validating a world dataset.
struct Diagnostic {
  std::string check;   // "row_balance", "column_balance", "negative", "schema", ...
  std::string file;
  std::string row;     // cell label, empty when not applicable
  std::string column;
  double expected = 0.0;
  double actual = 0.0;
  std::string message;
};

/// Validation failure carrying every diagnostic, not just the first.
class DataError : public Error {
 public:
  explicit DataError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace tradeshock
