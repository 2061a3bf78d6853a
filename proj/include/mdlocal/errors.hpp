#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdlocal {

// Invalid caller input: out-of-range ids, bad parameters, malformed files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed edge-list or side-table text. Line numbers are 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Thrown by an oracle call once the session's query budget is spent.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t budget, int depth = 0)
      : std::runtime_error("query budget of " + std::to_string(budget) +
                           " exhausted"),
        budget_(budget),
        depth_(depth) {}

  std::uint64_t budget() const { return budget_; }
  // Truncation depth that was being evaluated when the budget ran out.
  int depth() const { return depth_; }

 private:
  std::uint64_t budget_;
  int depth_;
};

}  // namespace mdlocal
