#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osa/bitstream.hpp"

namespace osa {

// Length in bits of the codeword for a 1-based rank:
// floor(2 + log2 j + 2 * log2(1 + log2 j)).
// The expression is an exact integer only at j = 2^(2^t - 1) (log2 j must be
// rational, hence j a power of two; then 2 * log2(1 + k) must be an integer,
// hence 1 + k a power of two); those ranks take an integer-only path, all
// others are safely decided in extended precision.
std::uint32_t ucode_length(std::uint64_t rank);

struct Codeword {
    std::uint64_t bits;  // value; bit length-1 is transmitted first
    std::uint32_t length;

    std::string to_string() const;
};

// Canonical prefix-free realization of the universal lengths: a counter v
// starts at 0 on the first length; each rank emits v at the current length
// and increments it; when the length grows by d the counter first shifts
// left by d. Kraft's sum below 1 keeps every value inside its length.
//
// The table materializes one block of consecutive ranks per distinct length
// and extends lazily. Instances are not synchronized: use one per thread.
class UniversalCode {
public:
    struct LengthBlock {
        std::uint32_t length;
        std::uint64_t first_rank;
        std::uint64_t count;
        std::uint64_t first_value;
    };

    // Ranks are capped so lazy extension stays cheap and values fit in 62
    // bits; far above any realistic alphabet.
    static constexpr std::uint64_t kMaxRank = 1ull << 28;
    static constexpr std::uint32_t kMaxLength = 62;

    Codeword codeword(std::uint64_t rank);
    LengthBlock block_for_rank(std::uint64_t rank);

    // Reads one codeword and returns its rank. Throws InvalidPrefix when the
    // bits precede every codeword of their length or exhaust the admissible
    // lengths, TruncatedStream when the stream ends mid-codeword.
    std::uint64_t parse(BitReader& reader);

private:
    bool try_append_block();
    void extend_to_rank(std::uint64_t rank);

    std::vector<LengthBlock> blocks_;
};

// Conveniences over a thread-local shared table.
Codeword codeword_for_rank(std::uint64_t rank);
std::uint64_t parse_codeword(BitReader& reader);

}  // namespace osa
