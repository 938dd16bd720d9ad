#pragma once

#include <stdexcept>
#include <string>

namespace rnm {

/// Root of the library's exception hierarchy. The CLI maps each subclass to
/// a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed input file, unknown atom id, weights not summing to one.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed, or evaluation hit an unbound name
/// or a domain error.
class ExprError : public Error {
public:
    using Error::Error;
};

/// Syntax error at a byte offset of the source text.
class ParseError : public ExprError {
public:
    ParseError(const std::string& what, std::size_t offset)
        : ExprError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace rnm
