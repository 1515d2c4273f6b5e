#include "osa/ucode.hpp"

#include <bit>
#include <cmath>

namespace osa {

std::uint32_t ucode_length(std::uint64_t rank) {
    if (rank == 0) fail(Errc::BadParameters, "codeword ranks start at 1");
    if (rank == 1) return 2;
    if (std::has_single_bit(rank)) {
        const unsigned k = static_cast<unsigned>(std::countr_zero(rank));
        if (std::has_single_bit(k + 1u)) {
            const unsigned t = static_cast<unsigned>(std::countr_zero(k + 1u));
            return 2u + k + 2u * t;
        }
    }
    const long double lg = std::log2(static_cast<long double>(rank));
    const long double raw = 2.0L + lg + 2.0L * std::log2(1.0L + lg);
    return static_cast<std::uint32_t>(raw);
}

std::string Codeword::to_string() const {
    std::string s(length, '0');
    for (std::uint32_t k = 0; k < length; ++k)
        if ((bits >> (length - 1 - k)) & 1u) s[k] = '1';
    return s;
}

bool UniversalCode::try_append_block() {
    std::uint64_t next_rank = 1;
    std::uint32_t prev_length = 0;
    std::uint64_t prev_end_value = 0;  // counter value after the previous block
    if (!blocks_.empty()) {
        const LengthBlock& last = blocks_.back();
        next_rank = last.first_rank + last.count;
        prev_length = last.length;
        prev_end_value = last.first_value + last.count;
    }
    if (next_rank > kMaxRank) return false;

    std::uint32_t length = ucode_length(next_rank);
    if (length < prev_length) length = prev_length;  // guard against roundoff dips
    if (length > kMaxLength) return false;

    // The lengths are non-decreasing in rank, so the block ends at the last
    // rank of equal length; locate it by doubling then bisecting.
    std::uint64_t lo = next_rank;  // known to have this length
    std::uint64_t step = 1;
    while (lo + step <= kMaxRank && ucode_length(lo + step) <= length) {
        lo += step;
        step <<= 1;
    }
    std::uint64_t hi = std::min(lo + step, kMaxRank + 1);  // first rank past the block
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ucode_length(mid) <= length)
            lo = mid;
        else
            hi = mid;
    }

    LengthBlock block;
    block.length = length;
    block.first_rank = next_rank;
    block.count = lo - next_rank + 1;
    block.first_value = prev_end_value << (length - prev_length);
    blocks_.push_back(block);
    return true;
}

void UniversalCode::extend_to_rank(std::uint64_t rank) {
    if (rank == 0) fail(Errc::BadParameters, "codeword ranks start at 1");
    if (rank > kMaxRank) fail(Errc::TooLarge, "codeword rank above the supported table");
    while (blocks_.empty() || blocks_.back().first_rank + blocks_.back().count <= rank)
        if (!try_append_block()) fail(Errc::TooLarge, "codeword rank above the supported table");
}

UniversalCode::LengthBlock UniversalCode::block_for_rank(std::uint64_t rank) {
    extend_to_rank(rank);
    // Blocks start at rank 1 and are contiguous; binary search the owner.
    std::size_t lo = 0;
    std::size_t hi = blocks_.size();
    while (lo + 1 < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (blocks_[mid].first_rank <= rank)
            lo = mid;
        else
            hi = mid;
    }
    return blocks_[lo];
}

Codeword UniversalCode::codeword(std::uint64_t rank) {
    const LengthBlock block = block_for_rank(rank);
    return Codeword{block.first_value + (rank - block.first_rank), block.length};
}

std::uint64_t UniversalCode::parse(BitReader& reader) {
    std::uint64_t value = 0;
    std::uint32_t consumed = 0;
    for (std::size_t bi = 0;; ++bi) {
        if (bi == blocks_.size() && !try_append_block())
            fail(Errc::InvalidPrefix, "bits match no codeword at any admissible length");
        const LengthBlock block = blocks_[bi];
        while (consumed < block.length) {
            value = (value << 1) | (reader.get_bit() ? 1u : 0u);
            ++consumed;
        }
        // Canonical values only grow with rank: falling below the block's
        // range can never recover at longer lengths.
        if (value < block.first_value)
            fail(Errc::InvalidPrefix, "bits match no codeword at any admissible length");
        if (value - block.first_value < block.count)
            return block.first_rank + (value - block.first_value);
    }
}

Codeword codeword_for_rank(std::uint64_t rank) {
    thread_local UniversalCode table;
    return table.codeword(rank);
}

std::uint64_t parse_codeword(BitReader& reader) {
    thread_local UniversalCode table;
    return table.parse(reader);
}

}  // namespace osa
