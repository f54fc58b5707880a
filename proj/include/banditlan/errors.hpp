#pragma once

#include <stdexcept>
#include <string>

namespace banditlan {

// Invalid user-supplied configuration: bad parameter values, unknown keys,
// unsupported combinations. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller broke an operation's precondition. The CLI maps this to exit code 2.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No arm has a strictly largest mean, so the fixed-gap expansion does not apply.
class UniqueOptimalArmViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace banditlan
