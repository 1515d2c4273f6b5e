#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "osa/core.hpp"

namespace osa {

enum class Tokenization { Bytes, Whitespace };

// Symbol statistics of a text or file. Symbols are numbered by first
// occurrence; `ids` is the whole stream rewritten in those numbers, so
// counts always sum to ids.size().
struct CorpusStats {
    Tokenization mode = Tokenization::Bytes;
    std::vector<std::string> symbols;   // printable label per id
    std::vector<std::uint64_t> counts;  // per id
    std::vector<std::uint32_t> ids;     // the stream
    std::uint64_t total = 0;

    std::size_t alphabet_size() const { return symbols.size(); }

    // Counts as weights, in first-occurrence order.
    FrequencyDistribution frequencies() const;
};

// Bytes mode counts raw octets (labeled by decimal value); whitespace mode
// splits on ASCII whitespace and labels symbols with the token text.
// Nothing to count raises EmptyCorpus.
CorpusStats ingest_text(std::string_view text, Tokenization mode);

// File wrapper; unreadable paths raise IoError.
CorpusStats ingest_corpus(const std::filesystem::path& path, Tokenization mode);

}  // namespace osa
