#pragma once

#include <stdexcept>
#include <string>

namespace idescope {

// Exit-code categories used by the command line tool.
//   2: malformed input (config schema, bad arguments, missing metadata)
//   3: numerical non-convergence
//   4: state constraint violations
enum class ErrorKind { Schema = 2, Convergence = 3, Constraint = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(ErrorKind::Schema, what) {}
};

class ConstraintError : public Error {
public:
    explicit ConstraintError(const std::string& what) : Error(ErrorKind::Constraint, what) {}
};

// Carries the partial value accumulated before the iteration gave up.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial)
        : Error(ErrorKind::Convergence, what), partial_(partial) {}
    double partial() const noexcept { return partial_; }

private:
    double partial_ = 0.0;
};

} // namespace idescope
