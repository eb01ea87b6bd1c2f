#pragma once

#include <stdexcept>
#include <string>

namespace homopart {

// Malformed input or a violated precondition on caller-supplied data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Inputs are well formed but the requested construction cannot be satisfied
// (e.g. a sampling pool smaller than its target).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace homopart
