#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace indel {

// Precondition or argument violation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation whose estimated cost exceeds the caller's budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t estimated, std::uint64_t allowed)
      : std::runtime_error(what + " (estimated " + std::to_string(estimated) +
                           " ops, budget " + std::to_string(allowed) + ")"),
        estimated_ops(estimated),
        budget_ops(allowed) {}

  std::uint64_t estimated_ops;
  std::uint64_t budget_ops;
};

// Materialization would need more memory than allowed.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::uint64_t required, std::uint64_t allowed)
      : std::runtime_error(what + " (requires " + std::to_string(required) + ", allowed " +
                           std::to_string(allowed) + ")"),
        required_size(required),
        allowed_size(allowed) {}

  std::uint64_t required_size;
  std::uint64_t allowed_size;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line_number, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line_number) + ": " + what),
        line(line_number) {}

  std::size_t line;
};

// A required table or file is absent.
class MissingData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace indel
