#pragma once

#include <stdexcept>
#include <string>

namespace am {

// Malformed data handed to an operation: unknown ids, bad bounds, wrong sizes.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Input outside the domain an operation is defined on, e.g. a non-hypercube
// table given to the exact substitutes checker.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Caller broke a documented contract, e.g. decomposing an unbalanced flow.
class precondition_error : public std::logic_error {
 public:
  explicit precondition_error(const std::string& what) : std::logic_error(what) {}
};

// Instance is too large for an exhaustive routine; the caller should shrink it.
class size_error : public std::runtime_error {
 public:
  explicit size_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace am
