#pragma once

#include <stdexcept>
#include <string>

namespace heisenspec {

// Exit code 2: the request itself is ill-posed (bad dimensions, out-of-range
// parameters, malformed input).  Exit code 3: the request is well-posed but a
// numerical process could not deliver (budget exhausted, degenerate fit,
// internal consistency check tripped).
class error : public std::runtime_error {
public:
    error(const char* code, int exit_code, const std::string& msg)
        : std::runtime_error(msg), code_(code), exit_code_(exit_code) {}
    const char* code() const noexcept { return code_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    const char* code_;
    int exit_code_;
};

#define HEISENSPEC_ERROR(name, code_str, exit_c)                          \
    class name : public error {                                           \
    public:                                                               \
        explicit name(const std::string& msg)                             \
            : error(code_str, exit_c, msg) {}                             \
    };

HEISENSPEC_ERROR(dimension_mismatch, "DimensionMismatch", 2)
HEISENSPEC_ERROR(range_violation, "RangeViolation", 2)
HEISENSPEC_ERROR(singular_frame, "SingularFrame", 2)
HEISENSPEC_ERROR(divergent_integral, "DivergentIntegral", 2)
HEISENSPEC_ERROR(condition_violated, "ConditionViolated", 2)
HEISENSPEC_ERROR(grid_too_large, "GridTooLarge", 2)
HEISENSPEC_ERROR(parse_error, "ParseError", 2)
HEISENSPEC_ERROR(io_error, "IOError", 2)

HEISENSPEC_ERROR(tolerance_not_met, "ToleranceNotMet", 3)
HEISENSPEC_ERROR(fit_failed, "FitFailed", 3)
HEISENSPEC_ERROR(assembly_fault, "AssemblyFault", 3)
HEISENSPEC_ERROR(inconsistency_fault, "InconsistencyFault", 3)

#undef HEISENSPEC_ERROR

}
