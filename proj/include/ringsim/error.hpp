#pragma once

#include <stdexcept>
#include <string>

namespace ringsim {

enum class errc {
    invalid_modulus,
    invalid_polynomial,
    construction_failure,
    ring_mismatch,
    not_a_unit,
    unsupported_ring,
    unsupported_modulus,
    invalid_threshold,
    not_invertible,
    not_invertible_modulus,
    unknown_gate,
    witness_inapplicable,
    contains_prep,
    non_invertible_gate,
    cannot_lower,
    too_many_branches,
    too_many_variables,
    width_overflow,
    parse_error,
    bad_argument,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_modulus: return "InvalidModulus";
        case errc::invalid_polynomial: return "InvalidPolynomial";
        case errc::construction_failure: return "ConstructionFailure";
        case errc::ring_mismatch: return "RingMismatch";
        case errc::not_a_unit: return "NotAUnit";
        case errc::unsupported_ring: return "UnsupportedRing";
        case errc::unsupported_modulus: return "UnsupportedModulus";
        case errc::invalid_threshold: return "InvalidThreshold";
        case errc::not_invertible: return "NotInvertible";
        case errc::not_invertible_modulus: return "NotInvertibleModulus";
        case errc::unknown_gate: return "UnknownGate";
        case errc::witness_inapplicable: return "WitnessInapplicable";
        case errc::contains_prep: return "ContainsPrep";
        case errc::non_invertible_gate: return "NonInvertibleGate";
        case errc::cannot_lower: return "CannotLower";
        case errc::too_many_branches: return "TooManyBranches";
        case errc::too_many_variables: return "TooManyVariables";
        case errc::width_overflow: return "WidthOverflow";
        case errc::parse_error: return "ParseError";
        case errc::bad_argument: return "BadArgument";
    }
    return "Error";
}

/// Library error type; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace ringsim
