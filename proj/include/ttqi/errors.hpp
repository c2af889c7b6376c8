#pragma once

#include <stdexcept>
#include <string>

namespace ttqi {

enum class ErrorKind {
    NonPhysicalState,
    PhysicalityViolation,
    BelowThreshold,
    AboveEnergy,
    DegenerateNormalization,
    KinematicSingularity,
    CollinearDegeneracy,
    NoRootInBracket,
    ParseError,
    UnsupportedFormat,
    FlavorUnavailable,
    OutOfRange,
    QuadratureFailure,
    EmptyWindow,
    NoSignature,
    NegativeDensity,
    InsufficientSample,
    DomainError,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace ttqi
