#include "osa/ohc.hpp"

#include <cmath>
#include <queue>
#include <tuple>

#include "osa/bitstream.hpp"

namespace osa {

HuffmanResult offline_huffman(const FrequencyDistribution& f) {
    const std::size_t n = f.size();
    if (n == 1) return HuffmanResult{{0u}, 0.0};

    // Node ids: leaves 0..n-1 in input order, internal nodes after that.
    // The heap orders by (weight, creation id), so ties merge the oldest
    // nodes first.
    using Entry = std::tuple<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<std::pair<std::size_t, std::size_t>> children;
    children.reserve(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        children.emplace_back(SIZE_MAX, SIZE_MAX);
        heap.emplace(f[i], i);
    }
    while (heap.size() > 1) {
        const auto [wa, a] = heap.top();
        heap.pop();
        const auto [wb, b] = heap.top();
        heap.pop();
        children.emplace_back(a, b);
        heap.emplace(wa + wb, children.size() - 1);
    }

    std::vector<std::uint32_t> depth(children.size(), 0);
    for (std::size_t node = children.size(); node-- > 0;) {
        const auto [a, b] = children[node];
        if (a == SIZE_MAX) continue;
        depth[a] = depth[node] + 1;
        depth[b] = depth[node] + 1;
    }

    HuffmanResult result;
    result.lengths.assign(depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(n));
    result.cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        result.cost += (f[i] / f.total()) * static_cast<double>(result.lengths[i]);
    return result;
}

std::vector<std::uint64_t> fcfsu_assign(const DrawSequence& order) {
    const std::size_t n = order.size();
    if (!is_permutation_sequence(order, n))
        fail(Errc::NotAPermutation, "order must be a permutation of the items");
    std::vector<std::uint64_t> ranks(n);
    for (std::size_t t = 0; t < n; ++t) ranks[order[t]] = t + 1;
    return ranks;
}

Instance ohc_game_instance(const FrequencyDistribution& f) {
    std::vector<double> costs(f.size());
    for (std::size_t t = 0; t < costs.size(); ++t)
        costs[t] = static_cast<double>(ucode_length(t + 1));
    return Instance{FrequencyDistribution(f.normalized()), CostVector(std::move(costs))};
}

EvaluationResult ohc_expected_cost(const FrequencyDistribution& f) {
    return exact_expected_cost(ohc_game_instance(f), SlotPolicy::fcfs());
}

EvaluationResult ohc_expected_cost_mc(const FrequencyDistribution& f, std::uint64_t trials,
                                      std::uint64_t seed, int threads) {
    return monte_carlo_expected_cost(ohc_game_instance(f), SlotPolicy::fcfs(), trials, seed,
                                     threads);
}

namespace {

constexpr char kMagic[4] = {'O', 'H', 'C', '1'};

double entropy_of_counts(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const std::uint64_t c : counts) {
        if (c == 0) continue;
        const double q = static_cast<double>(c) / static_cast<double>(total);
        h -= q * std::log2(q);
    }
    return h;
}

void finish_report(CodeCostReport& report, const std::vector<std::uint64_t>& rank_counts,
                   unsigned width) {
    report.literal_width = width;
    report.distinct_symbols = rank_counts.size();
    report.literal_bits = rank_counts.size() * width;
    report.assignment_cost =
        report.symbol_count == 0
            ? 0.0
            : static_cast<double>(report.assignment_bits) / static_cast<double>(report.symbol_count);
    report.entropy = entropy_of_counts(rank_counts, report.symbol_count);
    report.guarantee = report.entropy + 2.0 * std::log2(1.0 + report.entropy) + 2.0;
}

}  // namespace

std::vector<std::uint8_t> EncodedStream::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(13 + body.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(static_cast<std::uint8_t>(literal_width));
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>((body_bits >> shift) & 0xffu));
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

EncodedStream EncodedStream::parse(std::span<const std::uint8_t> raw) {
    if (raw.size() < 13) fail(Errc::BadHeader, "stream shorter than the header");
    for (int i = 0; i < 4; ++i)
        if (raw[static_cast<std::size_t>(i)] != static_cast<std::uint8_t>(kMagic[i]))
            fail(Errc::BadHeader, "bad magic");
    EncodedStream stream;
    stream.literal_width = raw[4];
    if (stream.literal_width < 1 || stream.literal_width > 32)
        fail(Errc::BadHeader, "literal width out of range");
    stream.body_bits = 0;
    for (std::size_t i = 5; i < 13; ++i) stream.body_bits = (stream.body_bits << 8) | raw[i];
    const std::uint64_t need = (stream.body_bits + 7) / 8;
    if (raw.size() - 13 < need) fail(Errc::BadHeader, "body shorter than declared");
    if (raw.size() - 13 > need) fail(Errc::BadHeader, "trailing bytes after the body");
    stream.body.assign(raw.begin() + 13, raw.end());
    return stream;
}

EncodeResult ohc_encode(std::span<const std::uint32_t> symbols, unsigned literal_width) {
    if (literal_width < 1 || literal_width > 32)
        fail(Errc::BadParameters, "literal width must be in [1, 32]");
    const std::uint64_t limit =
        literal_width == 32 ? 0xffffffffull : ((1ull << literal_width) - 1ull);

    BitWriter writer;
    SymbolTable table;
    UniversalCode code;
    std::vector<std::uint64_t> rank_counts;
    CodeCostReport report;
    for (const std::uint32_t symbol : symbols) {
        if (symbol > limit) fail(Errc::SymbolTooWide, "symbol does not fit the literal width");
        const auto known = table.rank_of(symbol);
        const std::uint64_t rank = known ? *known : table.rank_count() + 1;
        const Codeword cw = code.codeword(rank);
        writer.put_bits(cw.bits, cw.length);
        report.assignment_bits += cw.length;
        if (known) {
            ++rank_counts[static_cast<std::size_t>(rank - 1)];
        } else {
            writer.put_bits(symbol, literal_width);
            table.register_symbol(symbol);
            rank_counts.push_back(1);
        }
        ++report.symbol_count;
    }

    EncodedStream stream;
    stream.literal_width = literal_width;
    stream.body_bits = writer.bit_count();
    stream.body = writer.take();
    finish_report(report, rank_counts, literal_width);
    return EncodeResult{std::move(stream), report};
}

namespace {

// Shared decode loop; the visitor sees each decoded symbol in order.
template <class Visit>
void decode_stream(const EncodedStream& stream, std::vector<std::uint64_t>& rank_counts,
                   std::uint64_t& symbol_count, Visit&& visit) {
    BitReader reader(stream.body, stream.body_bits);
    SymbolTable table;
    UniversalCode code;
    while (reader.remaining() > 0) {
        const std::uint64_t rank = code.parse(reader);
        const std::uint64_t next = table.rank_count() + 1;
        std::uint32_t symbol;
        if (rank == next) {
            symbol = static_cast<std::uint32_t>(reader.get_bits(stream.literal_width));
            if (table.rank_of(symbol))
                fail(Errc::InvalidPrefix, "literal repeats an already-known symbol");
            table.register_symbol(symbol);
            rank_counts.push_back(0);
        } else if (rank > next) {
            fail(Errc::InvalidPrefix, "codeword rank was never assigned");
        } else {
            symbol = table.symbol_of(rank);
        }
        ++rank_counts[static_cast<std::size_t>(rank - 1)];
        ++symbol_count;
        visit(symbol);
    }
}

}  // namespace

std::vector<std::uint32_t> ohc_decode(const EncodedStream& stream) {
    std::vector<std::uint32_t> out;
    std::vector<std::uint64_t> rank_counts;
    std::uint64_t symbol_count = 0;
    decode_stream(stream, rank_counts, symbol_count,
                  [&](std::uint32_t symbol) { out.push_back(symbol); });
    return out;
}

CodeCostReport ohc_report(const EncodedStream& stream) {
    CodeCostReport report;
    std::vector<std::uint64_t> rank_counts;
    decode_stream(stream, rank_counts, report.symbol_count, [](std::uint32_t) {});
    report.assignment_bits =
        stream.body_bits - rank_counts.size() * stream.literal_width;
    finish_report(report, rank_counts, stream.literal_width);
    return report;
}

EncodeResult ohc_encode_bytes(std::span<const std::uint8_t> data) {
    std::vector<std::uint32_t> symbols(data.begin(), data.end());
    return ohc_encode(symbols, 8);
}

std::vector<std::uint8_t> ohc_decode_bytes(std::span<const std::uint8_t> raw) {
    const EncodedStream stream = EncodedStream::parse(raw);
    if (stream.literal_width != 8)
        fail(Errc::BadHeader, "stream does not carry byte symbols");
    const std::vector<std::uint32_t> symbols = ohc_decode(stream);
    return std::vector<std::uint8_t>(symbols.begin(), symbols.end());
}

}  // namespace osa
