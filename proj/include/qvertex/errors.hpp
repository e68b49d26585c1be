#pragma once

#include <stdexcept>
#include <string>

namespace qvertex {

enum class ErrorCode {
    NonRepresentableExponent,
    PoleAtSample,
    PoleAtSpecialization,
    NonVanishingCrossTerm,
    ConfigError,
    UnknownOperator,
    CacheCorrupt,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonRepresentableExponent: return "NonRepresentableExponent";
        case ErrorCode::PoleAtSample: return "PoleAtSample";
        case ErrorCode::PoleAtSpecialization: return "PoleAtSpecialization";
        case ErrorCode::NonVanishingCrossTerm: return "NonVanishingCrossTerm";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::UnknownOperator: return "UnknownOperator";
        case ErrorCode::CacheCorrupt: return "CacheCorrupt";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace qvertex
