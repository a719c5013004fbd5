#pragma once

#include <stdexcept>
#include <string>

namespace gaugekit {

/// Invalid scenario configuration; field names the offending JSON path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A numerical invariant (norm, unitarity, convergence) was violated at run time.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator terms that do not commute; frame terms would need time ordering.
class NonCommutingGenerator : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gaugekit
