#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfcycle {

/// Failure categories. The CLI maps each category onto its own exit code.
enum class ErrorKind {
    Domain,         ///< argument outside a function's domain
    Range,          ///< target value outside the reachable range (e.g. gain not admissible)
    Certification,  ///< structural hypothesis on the map could not be verified
    Design,         ///< control synthesis impossible for the requested inputs
    NoiseBound,     ///< noise amplitude too large for the design
    Parameter,      ///< inconsistent system parameters
    Numeric,        ///< non-convergence, NaN/inf, overflow
    Usage,          ///< API misuse (mismatched arguments, bad sweep, ...)
    Config,         ///< malformed or incomplete configuration file
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numeric failure raised inside a simulation; carries the offending step.
class SimulationError : public Error {
public:
    SimulationError(std::int64_t step, const std::string& what)
        : Error(ErrorKind::Numeric, what), step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pfcycle
