#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace causal {

enum class ErrorKind {
    Syntax,
    DuplicateVertex,
    UnknownVertex,
    Cycle,
    InvalidArgument,
    InvalidSet,
    NoAdjustmentSet,
    GuardExceeded,
    Unsupported,
    HypothesisFailed,
    InvalidLaw,
};

const char* to_string(ErrorKind kind);

// Domain error carrying a machine-readable kind. `detail` holds vertex names
// relevant to the failure (the cycle for Cycle, offending vertices otherwise).
class CausalError : public std::runtime_error {
public:
    CausalError(ErrorKind kind, const std::string& message,
                std::vector<std::string> detail = {}, int line = 0, int column = 0);

    ErrorKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& detail() const noexcept { return detail_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    ErrorKind kind_;
    std::vector<std::string> detail_;
    int line_;
    int column_;
};

}  // namespace causal
