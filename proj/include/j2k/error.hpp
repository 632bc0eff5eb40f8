#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace j2k {

enum class ErrorCode {
    NotARepository,
    UnreadableRepository,
    CorruptHistory,
    UndecodableContent,
    UnknownNode,
    UndefinedForAnomalous,
    DegenerateHistory,
    NoKotlinHistory,
    UnwritableOutput,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace j2k
