#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lkpolar {

enum class ErrorCode {
    DimensionMismatch,
    DomainError,
    NoConvergence,
    IllConditioned,
    ZeroGenerator,
    FaceNotInLattice,
    EmptyCone,
    DegenerateFace,
    TruncationSuspect,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // NoConvergence, IllConditioned and TruncationSuspect are numerical
    // failures; everything else is a malformed input.
    bool is_numerical() const noexcept {
        return code_ == ErrorCode::NoConvergence || code_ == ErrorCode::IllConditioned ||
               code_ == ErrorCode::TruncationSuspect;
    }

private:
    ErrorCode code_;
};

}  // namespace lkpolar
