#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "osa/core.hpp"
#include "osa/strategies.hpp"
#include "osa/ucode.hpp"

namespace osa {

struct HuffmanResult {
    std::vector<std::uint32_t> lengths;
    double cost;  // sum of normalized weight times length
};

// Classical bottom-up merge. Equal weights merge lowest creation index
// first, so lengths are deterministic. A single symbol gets length 0.
HuffmanResult offline_huffman(const FrequencyDistribution& f);

// Rank handed to each item when ranks go out in first-occurrence order:
// ranks[order[t]] = t + 1.
std::vector<std::uint64_t> fcfsu_assign(const DrawSequence& order);

// The allocation game whose slot costs are the universal codeword lengths,
// over normalized weights; its expected cost is expected bits per symbol.
Instance ohc_game_instance(const FrequencyDistribution& f);

// Exact expected codeword bits per symbol (capped by the exact evaluator).
EvaluationResult ohc_expected_cost(const FrequencyDistribution& f);

EvaluationResult ohc_expected_cost_mc(const FrequencyDistribution& f, std::uint64_t trials,
                                      std::uint64_t seed, int threads = 1);

// Dense symbol <-> rank map; ranks run 1, 2, ... in registration order.
class SymbolTable {
public:
    std::uint64_t rank_count() const { return symbols_.size(); }

    std::optional<std::uint64_t> rank_of(std::uint32_t symbol) const {
        const auto it = ranks_.find(symbol);
        if (it == ranks_.end()) return std::nullopt;
        return it->second;
    }

    std::uint32_t symbol_of(std::uint64_t rank) const {
        if (rank == 0 || rank > symbols_.size()) fail(Errc::BadParameters, "rank not assigned");
        return symbols_[static_cast<std::size_t>(rank - 1)];
    }

    // The symbol must be new; returns its rank.
    std::uint64_t register_symbol(std::uint32_t symbol) {
        if (ranks_.contains(symbol)) fail(Errc::BadParameters, "symbol already registered");
        symbols_.push_back(symbol);
        const std::uint64_t rank = symbols_.size();
        ranks_.emplace(symbol, rank);
        return rank;
    }

private:
    std::unordered_map<std::uint32_t, std::uint64_t> ranks_;
    std::vector<std::uint32_t> symbols_;
};

struct CodeCostReport {
    std::uint64_t symbol_count = 0;
    std::uint64_t distinct_symbols = 0;
    std::uint64_t assignment_bits = 0;  // codeword bits, the model's objective
    std::uint64_t literal_bits = 0;     // first-occurrence escape payloads
    double assignment_cost = 0.0;       // assignment_bits / symbol_count
    double entropy = 0.0;               // empirical, bits per symbol
    double guarantee = 0.0;             // entropy + 2*log2(1 + entropy) + 2
    unsigned literal_width = 8;
};

// In-memory encoded stream. Wire layout: magic "OHC1", one byte literal
// width, eight bytes of body bit count (big endian), then the body bits
// MSB-first with the final byte zero-padded.
struct EncodedStream {
    unsigned literal_width = 8;
    std::uint64_t body_bits = 0;
    std::vector<std::uint8_t> body;

    std::vector<std::uint8_t> serialize() const;
    static EncodedStream parse(std::span<const std::uint8_t> raw);
};

struct EncodeResult {
    EncodedStream stream;
    CodeCostReport report;
};

// One pass: a known symbol emits its codeword; a new symbol emits the next
// unused rank's codeword followed by the raw symbol in literal_width bits.
EncodeResult ohc_encode(std::span<const std::uint32_t> symbols, unsigned literal_width);

// Exact inverse: a parsed rank equal to the next unused rank announces a
// literal. Ranks beyond that are corruption.
std::vector<std::uint32_t> ohc_decode(const EncodedStream& stream);

// Decodes while only accounting, for report generation.
CodeCostReport ohc_report(const EncodedStream& stream);

EncodeResult ohc_encode_bytes(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> ohc_decode_bytes(std::span<const std::uint8_t> raw);

}  // namespace osa
