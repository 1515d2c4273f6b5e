#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "osa/errors.hpp"

namespace osa {

// Append-only bit buffer, MSB-first within each byte; the last byte is
// zero-padded.
class BitWriter {
public:
    void put_bit(bool bit) {
        const std::size_t byte = static_cast<std::size_t>(bit_count_ >> 3);
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (bit) bytes_[byte] |= static_cast<std::uint8_t>(0x80u >> (bit_count_ & 7));
        ++bit_count_;
    }

    // Writes the low `width` bits of value, most significant first.
    void put_bits(std::uint64_t value, unsigned width) {
        if (width > 64) fail(Errc::BadParameters, "bit width above 64");
        for (unsigned k = width; k > 0; --k) put_bit(((value >> (k - 1)) & 1u) != 0);
    }

    std::uint64_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    std::vector<std::uint8_t> take() {
        bit_count_ = 0;
        return std::move(bytes_);
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_count_ = 0;
};

// Reads MSB-first bits from a byte span; the logical length in bits is
// given explicitly so padding never leaks into the data.
class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_count)
        : bytes_(bytes), bit_count_(bit_count) {
        if (bit_count_ > static_cast<std::uint64_t>(bytes_.size()) * 8)
            fail(Errc::BadHeader, "declared bit length exceeds the buffer");
    }

    bool get_bit() {
        if (pos_ >= bit_count_) fail(Errc::TruncatedStream, "bit stream truncated");
        const bool bit =
            (bytes_[static_cast<std::size_t>(pos_ >> 3)] >> (7 - (pos_ & 7)) & 1u) != 0;
        ++pos_;
        return bit;
    }

    std::uint64_t get_bits(unsigned width) {
        if (width > 64) fail(Errc::BadParameters, "bit width above 64");
        std::uint64_t value = 0;
        for (unsigned k = 0; k < width; ++k) value = (value << 1) | (get_bit() ? 1u : 0u);
        return value;
    }

    std::uint64_t position() const { return pos_; }
    std::uint64_t remaining() const { return bit_count_ - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t bit_count_;
    std::uint64_t pos_ = 0;
};

}  // namespace osa
