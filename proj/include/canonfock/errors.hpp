#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace canonfock {

// Rejected input: bad shapes, violated preconditions, unusable configuration.
// The command line tool maps these to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  InvalidInput(std::string kind, const std::string& msg)
      : std::invalid_argument(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Numerics gave up on input that passed validation: near-singular solves,
// guarded resonances, truncation budgets. The command line tool maps these
// to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace canonfock
