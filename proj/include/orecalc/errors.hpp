#pragma once

#include <stdexcept>
#include <string>

namespace orecalc {

// Violated operation precondition (non-idempotent input, wrong algebra, ...).
class precondition_error : public std::runtime_error {
public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Configured resource budget exceeded (term counts, candidate counts).
class resource_error : public std::runtime_error {
public:
  resource_error(const std::string& what, unsigned long long reached)
      : std::runtime_error(what), reached_(reached) {}
  unsigned long long reached() const { return reached_; }

private:
  unsigned long long reached_;
};

// Consistency violation that signals a bug, not bad input.
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace orecalc
