#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hawknet {

enum class ErrorCode {
    NonStationary,
    NegativeEntry,
    BadScale,
    NonFinite,
    NoConvergence,
    EventAfterTau,
    TimeBeforeTau,
    ZeroBaseline,
    BudgetNegative,
    InfeasiblePlan,
    TooFewEvents,
    NoImprovement,
    MissingColumn,
    EmptyFile,
    UnknownArea,
    IoFailure,
    InvalidArgument,
};

[[nodiscard]] std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hawknet
