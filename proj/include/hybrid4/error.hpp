#pragma once

#include <stdexcept>
#include <string>

namespace hybrid4 {

enum class ErrorCode {
    UnknownKind,
    KindMismatch,
    DegenerateElement,
    InvalidParams,
    ConstraintViolation,
    ParseError,
    NonConformingInput,
    EmptyBox,
    UnknownRule,
    UnknownFunction,
    OracleDisagreement,
    UnsupportedElementKind,
};

inline const char* to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonConformingInput: return "NonConformingInput";
    case ErrorCode::EmptyBox: return "EmptyBox";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::OracleDisagreement: return "OracleDisagreement";
    case ErrorCode::UnsupportedElementKind: return "UnsupportedElementKind";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hybrid4
