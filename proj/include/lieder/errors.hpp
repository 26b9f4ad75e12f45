#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lieder {

/// Base of every error raised by the library. `kind()` is the stable,
/// machine-readable name that the CLI echoes in its reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define LIEDER_DEFINE_ERROR(Name)                                               \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& what) : Error(#Name, what) {}          \
    }

LIEDER_DEFINE_ERROR(DimensionMismatch);
LIEDER_DEFINE_ERROR(BadDirection);
LIEDER_DEFINE_ERROR(NotASubspace);
LIEDER_DEFINE_ERROR(MissingConstants);
LIEDER_DEFINE_ERROR(MissingEuler);
LIEDER_DEFINE_ERROR(NotInAlgebra);
LIEDER_DEFINE_ERROR(NotDegreeZero);
LIEDER_DEFINE_ERROR(BudgetTooSmall);
LIEDER_DEFINE_ERROR(UnknownVariable);
LIEDER_DEFINE_ERROR(NonsensePower);
LIEDER_DEFINE_ERROR(InvalidArgument);

#undef LIEDER_DEFINE_ERROR

/// Closure produced a nonzero bracket above the degree cap.
class CapExceeded : public Error {
public:
    CapExceeded(int degree, int cap)
        : Error("CapExceeded", "closure produced an element of degree " + std::to_string(degree) +
                                   " above the cap " + std::to_string(cap)),
          degree_(degree) {}

    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

/// Syntax error in an algebra or endomorphism file; line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("ParseError", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                  ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace lieder
