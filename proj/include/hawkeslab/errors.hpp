#pragma once

#include <stdexcept>
#include <string>

namespace hawkeslab {

enum class ErrorCode {
    config_invalid,
    unreachable_level,
    budget_exceeded,
    height_runaway,
    step_mismatch,
    divergent,
    explosion,
    no_density,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::config_invalid:    return "CONFIG_INVALID";
        case ErrorCode::unreachable_level: return "UNREACHABLE_LEVEL";
        case ErrorCode::budget_exceeded:   return "BUDGET_EXCEEDED";
        case ErrorCode::height_runaway:    return "HEIGHT_RUNAWAY";
        case ErrorCode::step_mismatch:     return "STEP_MISMATCH";
        case ErrorCode::divergent:         return "DIVERGENT";
        case ErrorCode::explosion:         return "EXPLOSION";
        case ErrorCode::no_density:        return "NO_DENSITY";
    }
    return "UNKNOWN";
}

class LabError : public std::runtime_error {
  public:
    LabError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

/// Invalid user-supplied configuration; maps to CLI exit code 2.
class ConfigError : public LabError {
  public:
    explicit ConfigError(const std::string& what) : LabError(ErrorCode::config_invalid, what) {}
};

}  // namespace hawkeslab
