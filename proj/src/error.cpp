#include "chainspill/error.hpp"

namespace chainspill {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::MalformedEvent: return "MalformedEvent";
        case ErrorCode::UnknownPool: return "UnknownPool";
        case ErrorCode::NoTrades: return "NoTrades";
        case ErrorCode::SourceUnavailable: return "SourceUnavailable";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::EmptyPortfolio: return "EmptyPortfolio";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::MissingSeries: return "MissingSeries";
        case ErrorCode::MissingDummies: return "MissingDummies";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::UnstableConfig: return "UnstableConfig";
        case ErrorCode::StaleArtifacts: return "StaleArtifacts";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace chainspill
