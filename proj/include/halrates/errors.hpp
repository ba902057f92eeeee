#pragma once

#include <stdexcept>
#include <string>

namespace halrates {

// Base class for everything this library throws on purpose. Catching this at
// the CLI boundary is what turns a bad input into exit code 1 instead of a
// stack trace.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A schedule rule produced a value outside [0,1] (or was asked for n = 0).
class ScheduleDomainError : public Error {
public:
    using Error::Error;
};

// A modulus required by an operation is not attached to the schedule.
class MissingModulusError : public Error {
public:
    using Error::Error;
};

// An argument is outside the documented domain (eps out of range, M < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A modulus of the wrong kind was passed (e.g. a divergence rate where a
// Cauchy modulus is expected).
class ModulusKindError : public Error {
public:
    using Error::Error;
};

// A documented precondition that is not a plain argument-domain issue failed
// (e.g. psi_decreasing on a non-decreasing schedule).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Vector dimensions do not match the operator.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A computation left the range of finite doubles, or an exact value is too
// large to materialize.
class NumericBlowupError : public Error {
public:
    using Error::Error;
};

// Configuration file problems: syntax or validation. Carries enough context
// to point the user at the offending line/field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string field = {}, long line = -1)
        : Error(format(what, field, line)), field_(std::move(field)), line_(line) {}

    const std::string& field() const { return field_; }
    long line() const { return line_; }

private:
    static std::string format(const std::string& what, const std::string& field, long line) {
        std::string msg = "config error";
        if (line >= 0) msg += " (line " + std::to_string(line) + ")";
        if (!field.empty()) msg += " [" + field + "]";
        msg += ": " + what;
        return msg;
    }

    std::string field_;
    long line_;
};

} // namespace halrates
