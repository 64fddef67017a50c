#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "edl/state.hpp"

namespace edl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string field;
    std::string constraint;

    std::string message() const { return field + " must " + constraint; }
    bool operator==(const Violation&) const = default;
};

/// Collected invariant violations; empty means valid.
class ValidationResult {
public:
    void add(std::string field, std::string constraint) {
        violations_.push_back({std::move(field), std::move(constraint)});
    }
    void merge(const ValidationResult& other) {
        violations_.insert(violations_.end(), other.violations_.begin(), other.violations_.end());
    }
    bool ok() const { return violations_.empty(); }
    const std::vector<Violation>& violations() const { return violations_; }
    std::string to_string() const;

    /// Throws ValidationError when any violation was recorded.
    void throw_if_invalid() const;

private:
    std::vector<Violation> violations_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// The H-equation has no finite fixed point when b*u == 0.
class SingularEquilibriumError : public Error {
public:
    using Error::Error;
};

/// Reading or writing an artifact on disk failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A computation produced inf or NaN.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Integration left the finite range; carries the last finite sample.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, std::size_t step, double time, StateVec last_finite)
        : NumericalError(what), step_(step), time_(time), last_finite_(last_finite) {}

    std::size_t step() const { return step_; }
    double time() const { return time_; }
    const StateVec& last_finite_state() const { return last_finite_; }

private:
    std::size_t step_;
    double time_;
    StateVec last_finite_;
};

}  // namespace edl
