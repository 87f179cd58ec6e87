#pragma once

#include <stdexcept>
#include <string>

namespace rze {

enum class ErrorKind {
    domain,        // argument outside the mathematical domain (log singularity, |w| >= 1 ...)
    range,         // result not representable as a double
    validation,    // parameters violate a type invariant or precondition
    inconclusive,  // a numerical procedure failed to reach its acceptance threshold
    quadrature,    // adaptive quadrature did not converge
    io
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::range: return "range";
        case ErrorKind::validation: return "validation";
        case ErrorKind::inconclusive: return "inconclusive";
        case ErrorKind::quadrature: return "quadrature";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class InconclusiveError : public Error {
public:
    explicit InconclusiveError(const std::string& what) : Error(ErrorKind::inconclusive, what) {}
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : Error(ErrorKind::quadrature, what + " (achieved error estimate " + std::to_string(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace rze
