#include "osa/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace osa {

FrequencyDistribution CorpusStats::frequencies() const {
    std::vector<double> weights(counts.begin(), counts.end());
    return FrequencyDistribution(std::move(weights));
}

namespace {

CorpusStats ingest_bytes(std::string_view text) {
    CorpusStats stats;
    stats.mode = Tokenization::Bytes;
    std::vector<std::int32_t> id_of(256, -1);
    stats.ids.reserve(text.size());
    for (const char ch : text) {
        const auto byte = static_cast<std::uint8_t>(ch);
        if (id_of[byte] < 0) {
            id_of[byte] = static_cast<std::int32_t>(stats.symbols.size());
            stats.symbols.push_back(std::to_string(static_cast<unsigned>(byte)));
            stats.counts.push_back(0);
        }
        const auto id = static_cast<std::uint32_t>(id_of[byte]);
        ++stats.counts[id];
        stats.ids.push_back(id);
    }
    stats.total = stats.ids.size();
    return stats;
}

CorpusStats ingest_tokens(std::string_view text) {
    CorpusStats stats;
    stats.mode = Tokenization::Whitespace;
    std::unordered_map<std::string, std::uint32_t> id_of;
    std::size_t pos = 0;
    const auto is_space = [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) != 0;
    };
    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && !is_space(text[end])) ++end;
        std::string token(text.substr(pos, end - pos));
        pos = end;
        auto [it, inserted] =
            id_of.try_emplace(token, static_cast<std::uint32_t>(stats.symbols.size()));
        if (inserted) {
            stats.symbols.push_back(std::move(token));
            stats.counts.push_back(0);
        }
        ++stats.counts[it->second];
        stats.ids.push_back(it->second);
    }
    stats.total = stats.ids.size();
    return stats;
}

}  // namespace

CorpusStats ingest_text(std::string_view text, Tokenization mode) {
    CorpusStats stats =
        mode == Tokenization::Bytes ? ingest_bytes(text) : ingest_tokens(text);
    if (stats.total == 0) fail(Errc::EmptyCorpus, "no symbols to count");
    return stats;
}

CorpusStats ingest_corpus(const std::filesystem::path& path, Tokenization mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(Errc::IoError, "cannot read " + path.string());
    return ingest_text(buffer.str(), mode);
}

}  // namespace osa
