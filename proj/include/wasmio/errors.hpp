#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wasmio {

// Malformed binary input. `offset` is the byte position that made the
// decoder give up.
struct DecodeError : std::runtime_error {
    DecodeError(std::size_t offset, const std::string& msg)
        : std::runtime_error("decode error at offset " + std::to_string(offset) + ": " + msg),
          offset(offset) {}
    std::size_t offset;
};

struct ValidateError : std::runtime_error {
    ValidateError(uint32_t function, std::size_t offset, const std::string& msg)
        : std::runtime_error("validation error in function " + std::to_string(function) +
                             " at offset " + std::to_string(offset) + ": " + msg),
          function(function), offset(offset) {}
    uint32_t function;
    std::size_t offset;
};

struct LinkError : std::runtime_error {
    explicit LinkError(const std::string& msg) : std::runtime_error("link error: " + msg) {}
};

struct EncodeError : std::runtime_error {
    explicit EncodeError(const std::string& msg) : std::runtime_error("encode error: " + msg) {}
};

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error("module spec error: " + msg) {}
};

// Text-format errors (platform files, manifests, scenarios, cost files).
struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("parse error on line " + std::to_string(line) + ": " + msg),
          line(line) {}
    std::size_t line;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& msg) : std::runtime_error("scenario error: " + msg) {}
};

struct IncompleteTransfer : std::runtime_error {
    explicit IncompleteTransfer(const std::string& msg)
        : std::runtime_error("incomplete transfer: " + msg) {}
};

// Host-side bug (e.g. a bus access to an address no device registered).
// Services can never trigger this; the access layer validates first.
struct SimulationFault : std::logic_error {
    explicit SimulationFault(const std::string& msg) : std::logic_error("simulation fault: " + msg) {}
};

}  // namespace wasmio
