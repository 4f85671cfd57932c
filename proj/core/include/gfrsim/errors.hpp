#pragma once

#include <stdexcept>
#include <string>

namespace gfrsim {

/// Invalid scenario or component configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model invariant was violated at run time (a simulator bug, not bad
/// input). Maps to CLI exit code 3.
class ModelError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] void throw_model_error(const std::string& what);

#define GFRSIM_ASSERT(cond, msg)                                   \
  do {                                                             \
    if (!(cond)) ::gfrsim::throw_model_error(std::string(msg) +    \
                                             " [" #cond "]");      \
  } while (0)

}  // namespace gfrsim
