#pragma once

#include <stdexcept>
#include <string>

namespace corral {

// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A runtime invariant of the simulation was broken (CLI exit code 3).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A caller broke an operation's precondition, e.g. an action outside the current set.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace corral
