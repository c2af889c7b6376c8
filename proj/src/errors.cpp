#include "ttqi/errors.hpp"

namespace ttqi {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonPhysicalState: return "NonPhysicalState";
        case ErrorKind::PhysicalityViolation: return "PhysicalityViolation";
        case ErrorKind::BelowThreshold: return "BelowThreshold";
        case ErrorKind::AboveEnergy: return "AboveEnergy";
        case ErrorKind::DegenerateNormalization: return "DegenerateNormalization";
        case ErrorKind::KinematicSingularity: return "KinematicSingularity";
        case ErrorKind::CollinearDegeneracy: return "CollinearDegeneracy";
        case ErrorKind::NoRootInBracket: return "NoRootInBracket";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorKind::FlavorUnavailable: return "FlavorUnavailable";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::EmptyWindow: return "EmptyWindow";
        case ErrorKind::NoSignature: return "NoSignature";
        case ErrorKind::NegativeDensity: return "NegativeDensity";
        case ErrorKind::InsufficientSample: return "InsufficientSample";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

}  // namespace ttqi
