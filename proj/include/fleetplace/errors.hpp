#pragma once

#include <stdexcept>
#include <string>

namespace fleetplace {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. line/column are 1-based; column counts fields.
struct ParseError : Error {
  ParseError(int line_, int column_, const std::string& reason)
      : Error("parse error at line " + std::to_string(line_) + ", field " +
              std::to_string(column_) + ": " + reason),
        line(line_),
        column(column_) {}
  int line;
  int column;
};

// Structurally valid input that breaks an instance rule.
struct ValidationError : Error {
  ValidationError(const std::string& entity_, const std::string& rule_)
      : Error("validation failed for " + entity_ + ": " + rule_),
        entity(entity_),
        rule(rule_) {}
  std::string entity;
  std::string rule;
};

// Assignment or instance that cannot satisfy the placement constraints.
struct InfeasibleError : Error {
  using Error::Error;
};

// Enumeration guard tripped before the search space was explored.
struct BudgetExceededError : Error {
  using Error::Error;
};

struct NoCompatibleVehicleError : Error {
  using Error::Error;
};

struct PoolTooSmallError : Error {
  using Error::Error;
};

// Solution import failures.
struct UnknownVariableError : Error {
  using Error::Error;
};

struct NonBinaryValueError : Error {
  using Error::Error;
};

struct InfeasibleReconstructionError : Error {
  using Error::Error;
};

}  // namespace fleetplace
