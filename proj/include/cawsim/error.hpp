#pragma once

#include <stdexcept>
#include <string>

namespace cawsim {

enum class ErrorCode {
    io_error,
    bad_format,
    missing_column,
    unparseable_value,
    empty_trace,
    unknown_node,
    unknown_governor,
    negative_intensity,
    gap_detected,
    out_of_range,
    infeasible_window,
    missing_variant_trace,
    invalid_argument,
    internal,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::bad_format: return "bad_format";
        case ErrorCode::missing_column: return "missing_column";
        case ErrorCode::unparseable_value: return "unparseable_value";
        case ErrorCode::empty_trace: return "empty_trace";
        case ErrorCode::unknown_node: return "unknown_node";
        case ErrorCode::unknown_governor: return "unknown_governor";
        case ErrorCode::negative_intensity: return "negative_intensity";
        case ErrorCode::gap_detected: return "gap_detected";
        case ErrorCode::out_of_range: return "out_of_range";
        case ErrorCode::infeasible_window: return "infeasible_window";
        case ErrorCode::missing_variant_trace: return "missing_variant_trace";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::internal: return "internal";
    }
    return "internal";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace cawsim
