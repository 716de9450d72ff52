#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lagrangeflow {

/// A caller broke an operation's precondition (wrong measure tag, grid mismatch, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Unknown case or generator name.
class UnknownName : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration; `field` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field_name, const std::string& message)
        : std::invalid_argument(field_name + ": " + message), field(std::move(field_name)) {}
    std::string field;
};

/// Allocation for an ensemble or process sample could not be satisfied.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(std::size_t bytes)
        : std::runtime_error("cannot allocate " + std::to_string(bytes) + " bytes"),
          requested_bytes(bytes) {}
    std::size_t requested_bytes;
};

}  // namespace lagrangeflow
