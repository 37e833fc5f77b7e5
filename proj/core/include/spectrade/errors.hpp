#pragma once

#include <stdexcept>
#include <string>

namespace spectrade {

// Base for everything the simulator throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad scenario configuration (unknown key, unsupported value, schema violation).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Numeric input outside the valid domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Transaction or block fails a validation rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

// API misuse that violates a protocol precondition (e.g. mixing reuse colors).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Node does not meet the reputation bar for mining.
class QualificationError : public Error {
public:
    using Error::Error;
};

// Unknown identifier in a table or registry.
class LookupError : public Error {
public:
    using Error::Error;
};

// End-to-end run aborted; message carries epoch and step.
class SimulationError : public Error {
public:
    using Error::Error;
};

} // namespace spectrade
