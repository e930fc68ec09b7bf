#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kheval {

enum class ErrorKind {
    // registry
    DuplicateName,
    InvalidName,
    UnknownComponent,
    // datasets
    IoError,
    SchemaError,
    ValidationError,
    // backends
    TransportError,
    BackendRefusal,
    CapabilityError,
    AlignmentError,
    // scaling
    MissingLogprobs,
    Precondition,
    // evaluators
    UnknownTemplate,
    ParseFailure,
    // pipeline / cli
    ConfigError,
    HeterogeneousConfigs,
    UsageError,
    Internal,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the whole harness. `stage()` is set by the
/// pipeline when an error is re-thrown with run-stage context, and drives
/// the CLI exit-code mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind),
          message_(std::move(message)) {}

    Error(ErrorKind kind, std::string message, std::string stage)
        : std::runtime_error("stage=" + stage + " " + std::string(to_string(kind)) + ": " +
                             message),
          kind_(kind),
          message_(std::move(message)),
          stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& stage() const noexcept { return stage_; }

private:
    ErrorKind kind_;
    std::string message_;
    std::string stage_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::InvalidName: return "InvalidName";
        case ErrorKind::UnknownComponent: return "UnknownComponent";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::TransportError: return "TransportError";
        case ErrorKind::BackendRefusal: return "BackendRefusal";
        case ErrorKind::CapabilityError: return "CapabilityError";
        case ErrorKind::AlignmentError: return "AlignmentError";
        case ErrorKind::MissingLogprobs: return "MissingLogprobs";
        case ErrorKind::Precondition: return "Precondition";
        case ErrorKind::UnknownTemplate: return "UnknownTemplate";
        case ErrorKind::ParseFailure: return "ParseFailure";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::HeterogeneousConfigs: return "HeterogeneousConfigs";
        case ErrorKind::UsageError: return "UsageError";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace kheval
