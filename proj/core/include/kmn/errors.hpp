#pragma once

#include <stdexcept>
#include <string>

namespace kmn {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- expression kernel ---

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnknownSymbol : public Error {
public:
    UnknownSymbol(const std::string& name, std::size_t offset)
        : Error("unknown symbol '" + name + "' (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_ = 0;
};

class ArithmeticOverflow : public Error {
public:
    using Error::Error;
};

class OrderOverflow : public Error {
public:
    using Error::Error;
};

class CyclicSubstitution : public Error {
public:
    using Error::Error;
};

class EvalDomain : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnboundSymbol : public Error {
public:
    using Error::Error;
};

// --- prolongation / classification ---

class LinearEquation : public Error {
public:
    using Error::Error;
};

class AmbiguousSpan : public Error {
public:
    using Error::Error;
};

class FamilyMismatch : public Error {
public:
    using Error::Error;
};

class NonInvertibleParameterization : public Error {
public:
    using Error::Error;
};

class DegenerateResult : public Error {
public:
    using Error::Error;
};

// --- reduction ---

class UnsupportedGenerator : public Error {
public:
    using Error::Error;
};

class TrivialOrbit : public Error {
public:
    using Error::Error;
};

class ResidualHasX : public Error {
public:
    using Error::Error;
};

class SpecMismatch : public Error {
public:
    using Error::Error;
};

class DegenerateScaling : public Error {
public:
    using Error::Error;
};

class GuardViolation : public Error {
public:
    using Error::Error;
};

// --- numerics ---

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

class CFLViolation : public Error {
public:
    using Error::Error;
};

class ExtrapolationRequest : public Error {
public:
    using Error::Error;
};

class NoOverlap : public Error {
public:
    using Error::Error;
};

}  // namespace kmn
