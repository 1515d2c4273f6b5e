#pragma once

#include <stdexcept>
#include <string>

namespace osa {

// Error taxonomy shared by the whole library. Consumers can match on the
// code instead of parsing messages.
enum class Errc {
    LengthMismatch,
    NonPositiveWeight,
    DecreasingCosts,
    PartialAllocation,
    NotAPermutation,
    TooLarge,
    ZeroOptimum,
    BadParameters,
    CapExceeded,
    InvalidPrefix,
    TruncatedStream,
    BadHeader,
    SymbolTooWide,
    BadSpec,
    IoError,
    EmptyCorpus,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

const char* errc_name(Errc code);

}  // namespace osa
