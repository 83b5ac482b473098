#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainspill {

enum class ErrorCode {
    InvalidArgument,
    Io,
    MalformedEvent,
    UnknownPool,
    NoTrades,
    SourceUnavailable,
    SchemaMismatch,
    NonPositivePrice,
    EmptyPortfolio,
    InsufficientData,
    NonConvergence,
    DegenerateSeries,
    DegenerateDistribution,
    SingularDesign,
    ZeroVariance,
    MissingSeries,
    MissingDummies,
    WindowTooShort,
    UnstableConfig,
    StaleArtifacts,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure carries a machine-checkable code so
/// callers (and the CLI exit-status mapping) can branch without string parsing.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace chainspill
