#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskonly {

/// Typed failure codes surfaced by the library. Each code belongs to one
/// category, which the CLI maps onto its exit codes (config=1, data=2,
/// numerical=3).
enum class Errc {
    // data / input problems
    MalformedRow,
    DuplicateDate,
    NonMonthlyGap,
    TooFewAssets,
    InsufficientHistory,
    WindowTooShort,
    SeriesTooShort,
    SingleAssetUniverse,
    EmptyHistory,
    IoError,
    // configuration problems
    WeightSumMismatch,
    UnassignedAsset,
    ConfigError,
    // numerical failures
    SingularCovariance,
    EmptyActiveSet,
    ZeroVarianceAsset,
    NoConvergence,
    DegenerateBenchmark,
    DegenerateSeries,
    ZeroRiskPortfolio,
    PortfolioWipeout,
};

enum class ErrorCategory { Config, Data, Numerical };

std::string_view errc_name(Errc code);
ErrorCategory errc_category(Errc code);

/// Exception carrying a typed code; what() reads "CodeName: message".
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          message_(message) {}

    Errc code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return errc_category(code_); }
    /// Message without the code prefix (used when re-wrapping with context).
    const std::string& detail() const noexcept { return message_; }

private:
    Errc code_;
    std::string message_;
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::MalformedRow: return "MalformedRow";
        case Errc::DuplicateDate: return "DuplicateDate";
        case Errc::NonMonthlyGap: return "NonMonthlyGap";
        case Errc::TooFewAssets: return "TooFewAssets";
        case Errc::InsufficientHistory: return "InsufficientHistory";
        case Errc::WindowTooShort: return "WindowTooShort";
        case Errc::SeriesTooShort: return "SeriesTooShort";
        case Errc::SingleAssetUniverse: return "SingleAssetUniverse";
        case Errc::EmptyHistory: return "EmptyHistory";
        case Errc::IoError: return "IoError";
        case Errc::WeightSumMismatch: return "WeightSumMismatch";
        case Errc::UnassignedAsset: return "UnassignedAsset";
        case Errc::ConfigError: return "ConfigError";
        case Errc::SingularCovariance: return "SingularCovariance";
        case Errc::EmptyActiveSet: return "EmptyActiveSet";
        case Errc::ZeroVarianceAsset: return "ZeroVarianceAsset";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DegenerateBenchmark: return "DegenerateBenchmark";
        case Errc::DegenerateSeries: return "DegenerateSeries";
        case Errc::ZeroRiskPortfolio: return "ZeroRiskPortfolio";
        case Errc::PortfolioWipeout: return "PortfolioWipeout";
    }
    return "UnknownError";
}

inline ErrorCategory errc_category(Errc code) {
    switch (code) {
        case Errc::WeightSumMismatch:
        case Errc::UnassignedAsset:
        case Errc::ConfigError:
            return ErrorCategory::Config;
        case Errc::MalformedRow:
        case Errc::DuplicateDate:
        case Errc::NonMonthlyGap:
        case Errc::TooFewAssets:
        case Errc::InsufficientHistory:
        case Errc::WindowTooShort:
        case Errc::SeriesTooShort:
        case Errc::SingleAssetUniverse:
        case Errc::EmptyHistory:
        case Errc::IoError:
            return ErrorCategory::Data;
        default:
            return ErrorCategory::Numerical;
    }
}

}  // namespace riskonly
