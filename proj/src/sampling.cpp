#include "osa/sampling.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace osa {

bool is_permutation_sequence(const DrawSequence& seq, std::size_t n) {
    if (seq.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (std::uint32_t v : seq) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

std::uint64_t RandomSource::next_below(std::uint64_t bound) {
    if (bound == 0) fail(Errc::BadParameters, "bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = gen_();
        if (r >= threshold) return r % bound;
    }
}

RandomSource RandomSource::derive(std::uint64_t base_seed, std::uint64_t stream) {
    // splitmix64 finalizer; spreads consecutive indices across the seed space.
    std::uint64_t z = stream + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return RandomSource(base_seed ^ z);
}

WeightedSampler::WeightedSampler(std::span<const double> weights)
    : n_(weights.size()), remaining_(weights.size()), leaf_(weights.begin(), weights.end()) {
    if (n_ == 0) fail(Errc::LengthMismatch, "sampler needs at least one weight");
    for (double w : leaf_)
        if (!(w > 0.0)) fail(Errc::NonPositiveWeight, "sampler weights must be positive");
    tree_.assign(n_ + 1, 0.0);
    for (std::size_t i = 1; i <= n_; ++i) {
        tree_[i] += leaf_[i - 1];
        const std::size_t parent = i + (i & (0 - i));
        if (parent <= n_) tree_[parent] += tree_[i];
    }
    initial_leaf_ = leaf_;
    initial_tree_ = tree_;
}

double WeightedSampler::total() const {
    double s = 0.0;
    for (std::size_t i = n_; i > 0; i -= i & (0 - i)) s += tree_[i];
    return s;
}

void WeightedSampler::remove(std::size_t item) {
    if (item >= n_) fail(Errc::BadParameters, "sampler item out of range");
    if (leaf_[item] == 0.0) fail(Errc::BadParameters, "sampler item already removed");
    const double delta = leaf_[item];
    leaf_[item] = 0.0;
    for (std::size_t i = item + 1; i <= n_; i += i & (0 - i)) tree_[i] -= delta;
    --remaining_;
}

std::size_t WeightedSampler::lower_bound(double target) const {
    std::size_t pos = 0;
    double rem = target;
    for (std::size_t bit = std::bit_floor(n_); bit > 0; bit >>= 1) {
        const std::size_t next = pos + bit;
        if (next <= n_ && tree_[next] <= rem) {
            pos = next;
            rem -= tree_[next];
        }
    }
    return pos;  // 0-based item whose cumulative interval contains target
}

std::size_t WeightedSampler::draw_and_remove(RandomSource& rng) {
    if (remaining_ == 0) fail(Errc::BadParameters, "sampler is exhausted");
    std::size_t item = lower_bound(rng.next_unit() * total());
    if (item >= n_ || leaf_[item] == 0.0) {
        // Roundoff landed exactly on a boundary or past the last live leaf;
        // fall back to the nearest live item.
        if (item >= n_) item = n_ - 1;
        while (item > 0 && leaf_[item] == 0.0) --item;
        while (item + 1 < n_ && leaf_[item] == 0.0) ++item;
    }
    remove(item);
    return item;
}

void WeightedSampler::reset() {
    leaf_ = initial_leaf_;
    tree_ = initial_tree_;
    remaining_ = n_;
}

DrawSequence draw_without_replacement(const FrequencyDistribution& f, RandomSource& rng) {
    WeightedSampler sampler(f.weights());
    DrawSequence seq;
    seq.reserve(f.size());
    while (sampler.remaining() > 0)
        seq.push_back(static_cast<std::uint32_t>(sampler.draw_and_remove(rng)));
    return seq;
}

template <class T>
T permutation_probability_t(const FrequencyDistribution& f, const DrawSequence& seq) {
    const std::size_t n = f.size();
    if (!is_permutation_sequence(seq, n))
        fail(Errc::NotAPermutation, "sequence is not a permutation of the items");
    // Suffix totals make each factor weight / remaining-total exact in T.
    std::vector<T> suffix(n + 1, scalar_from_double<T>(0.0));
    for (std::size_t t = n; t > 0; --t)
        suffix[t - 1] = suffix[t] + scalar_from_double<T>(f[seq[t - 1]]);
    T prob = scalar_from_double<T>(1.0);
    for (std::size_t t = 0; t < n; ++t) prob *= scalar_from_double<T>(f[seq[t]]) / suffix[t];
    return prob;
}

template double permutation_probability_t<double>(const FrequencyDistribution&,
                                                  const DrawSequence&);
template Rational permutation_probability_t<Rational>(const FrequencyDistribution&,
                                                      const DrawSequence&);

double permutation_probability(const FrequencyDistribution& f, const DrawSequence& seq) {
    return permutation_probability_t<double>(f, seq);
}

Rational permutation_probability_exact(const FrequencyDistribution& f, const DrawSequence& seq) {
    return permutation_probability_t<Rational>(f, seq);
}

std::uint64_t factorial(std::size_t n) {
    if (n > 20) fail(Errc::TooLarge, "factorial overflows past n = 20");
    std::uint64_t r = 1;
    for (std::size_t k = 2; k <= n; ++k) r *= k;
    return r;
}

std::uint64_t permutation_index(const DrawSequence& seq) {
    const std::size_t n = seq.size();
    std::uint64_t index = 0;
    for (std::size_t t = 0; t < n; ++t) {
        std::uint64_t smaller = 0;
        for (std::size_t s = t + 1; s < n; ++s)
            if (seq[s] < seq[t]) ++smaller;
        index += smaller * factorial(n - 1 - t);
    }
    return index;
}

DrawSequence permutation_from_index(std::size_t n, std::uint64_t index) {
    if (index >= factorial(n)) fail(Errc::BadParameters, "permutation index out of range");
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    DrawSequence seq;
    seq.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::uint64_t block = factorial(n - 1 - t);
        const std::size_t at = static_cast<std::size_t>(index / block);
        index %= block;
        seq.push_back(pool[at]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    }
    return seq;
}

namespace {

constexpr std::size_t kMaxEnumerate = 9;

void require_enumerable(std::size_t n) {
    if (n > kMaxEnumerate) fail(Errc::TooLarge, "exhaustive enumeration is capped at 9 items");
}

}  // namespace

template <class T>
OrderDistribution<T> exact_order_distribution_t(const FrequencyDistribution& f) {
    const std::size_t n = f.size();
    require_enumerable(n);
    OrderDistribution<T> dist;
    dist.n = n;
    dist.prob.assign(factorial(n), scalar_from_double<T>(0.0));
    DrawSequence seq(n);
    std::iota(seq.begin(), seq.end(), 0u);
    do {
        dist.prob[permutation_index(seq)] = permutation_probability_t<T>(f, seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return dist;
}

template OrderDistribution<double> exact_order_distribution_t<double>(const FrequencyDistribution&);
template OrderDistribution<Rational> exact_order_distribution_t<Rational>(
    const FrequencyDistribution&);

OrderDistribution<double> exact_order_distribution(const FrequencyDistribution& f) {
    return exact_order_distribution_t<double>(f);
}

OrderDistribution<Rational> exact_order_distribution_exact(const FrequencyDistribution& f) {
    return exact_order_distribution_t<Rational>(f);
}

namespace {

std::vector<std::uint32_t> complement_of(const std::vector<std::uint32_t>& part, std::size_t n) {
    std::vector<char> in_part(n, 0);
    for (std::uint32_t v : part) {
        if (v >= n) fail(Errc::BadParameters, "part contains an item out of range");
        if (in_part[v]) fail(Errc::BadParameters, "part lists an item twice");
        in_part[v] = 1;
    }
    std::vector<std::uint32_t> rest;
    rest.reserve(n - part.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!in_part[i]) rest.push_back(static_cast<std::uint32_t>(i));
    return rest;
}

double weight_of(const FrequencyDistribution& f, std::span<const std::uint32_t> items) {
    double s = 0.0;
    for (std::uint32_t v : items) s += f[v];
    return s;
}

DrawSequence merge_two(const FrequencyDistribution& f, const DrawSequence& a,
                       const DrawSequence& b, RandomSource& rng) {
    DrawSequence out;
    out.reserve(a.size() + b.size());
    double wa = weight_of(f, a);
    double wb = weight_of(f, b);
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < a.size() && ib < b.size()) {
        // Head of a wins with probability wa / (wa + wb); a forced side
        // consumes no randomness.
        if (rng.next_unit() * (wa + wb) < wa) {
            wa -= f[a[ia]];
            out.push_back(a[ia++]);
        } else {
            wb -= f[b[ib]];
            out.push_back(b[ib++]);
        }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(ia), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(ib), b.end());
    return out;
}

DrawSequence permute_halving(const FrequencyDistribution& f, std::span<const std::uint32_t> items,
                             RandomSource& rng) {
    if (items.size() <= 1) return DrawSequence(items.begin(), items.end());
    const std::size_t half = items.size() / 2;
    const DrawSequence a = permute_halving(f, items.first(half), rng);
    const DrawSequence b = permute_halving(f, items.subspan(half), rng);
    return merge_two(f, a, b, rng);
}

}  // namespace

DrawSequence merge_sample(const FrequencyDistribution& f, const std::vector<std::uint32_t>& part,
                          RandomSource& rng) {
    const std::size_t n = f.size();
    std::vector<std::uint32_t> rest = complement_of(part, n);
    std::vector<std::uint32_t> sorted_part(part);
    std::sort(sorted_part.begin(), sorted_part.end());
    const DrawSequence a = permute_halving(f, sorted_part, rng);
    const DrawSequence b = permute_halving(f, rest, rng);
    return merge_two(f, a, b, rng);
}

namespace {

template <class T>
using WeightedOrders = std::vector<std::pair<DrawSequence, T>>;

// Enumerates every interleaving of a and b with its coin-path probability.
template <class T>
void merge_enumerate(const FrequencyDistribution& f, const DrawSequence& a, const DrawSequence& b,
                     std::size_t ia, std::size_t ib, T wa, T wb, T prob, DrawSequence& prefix,
                     WeightedOrders<T>& out) {
    if (ia == a.size() && ib == b.size()) {
        out.emplace_back(prefix, prob);
        return;
    }
    if (ia == a.size()) {
        const std::size_t mark = prefix.size();
        prefix.insert(prefix.end(), b.begin() + static_cast<std::ptrdiff_t>(ib), b.end());
        out.emplace_back(prefix, prob);
        prefix.resize(mark);
        return;
    }
    if (ib == b.size()) {
        const std::size_t mark = prefix.size();
        prefix.insert(prefix.end(), a.begin() + static_cast<std::ptrdiff_t>(ia), a.end());
        out.emplace_back(prefix, prob);
        prefix.resize(mark);
        return;
    }
    const T total = wa + wb;
    {
        const T fa = scalar_from_double<T>(f[a[ia]]);
        prefix.push_back(a[ia]);
        merge_enumerate<T>(f, a, b, ia + 1, ib, T(wa - fa), wb, T(prob * (wa / total)), prefix,
                           out);
        prefix.pop_back();
    }
    {
        const T fb = scalar_from_double<T>(f[b[ib]]);
        prefix.push_back(b[ib]);
        merge_enumerate<T>(f, a, b, ia, ib + 1, wa, T(wb - fb), T(prob * (wb / total)), prefix,
                           out);
        prefix.pop_back();
    }
}

template <class T>
WeightedOrders<T> merge_all_pairs(const FrequencyDistribution& f, const WeightedOrders<T>& da,
                                  const WeightedOrders<T>& db) {
    WeightedOrders<T> out;
    DrawSequence prefix;
    for (const auto& [a, pa] : da) {
        const T wa = scalar_from_double<T>(weight_of(f, a));
        for (const auto& [b, pb] : db) {
            const T wb = scalar_from_double<T>(weight_of(f, b));
            merge_enumerate<T>(f, a, b, 0, 0, wa, wb, pa * pb, prefix, out);
        }
    }
    return out;
}

// Mirror of permute_halving with all coin branches expanded.
template <class T>
WeightedOrders<T> enumerate_halving(const FrequencyDistribution& f,
                                    std::span<const std::uint32_t> items) {
    if (items.size() <= 1) {
        WeightedOrders<T> out;
        out.emplace_back(DrawSequence(items.begin(), items.end()), scalar_from_double<T>(1.0));
        return out;
    }
    const std::size_t half = items.size() / 2;
    return merge_all_pairs<T>(f, enumerate_halving<T>(f, items.first(half)),
                              enumerate_halving<T>(f, items.subspan(half)));
}

}  // namespace

template <class T>
OrderDistribution<T> merge_order_distribution_t(const FrequencyDistribution& f,
                                                const std::vector<std::uint32_t>& part) {
    const std::size_t n = f.size();
    require_enumerable(n);
    std::vector<std::uint32_t> rest = complement_of(part, n);
    std::vector<std::uint32_t> sorted_part(part);
    std::sort(sorted_part.begin(), sorted_part.end());
    const WeightedOrders<T> merged = merge_all_pairs<T>(
        f, enumerate_halving<T>(f, sorted_part), enumerate_halving<T>(f, rest));
    OrderDistribution<T> dist;
    dist.n = n;
    dist.prob.assign(factorial(n), scalar_from_double<T>(0.0));
    for (const auto& [seq, p] : merged) dist.prob[permutation_index(seq)] += p;
    return dist;
}

template OrderDistribution<double> merge_order_distribution_t<double>(
    const FrequencyDistribution&, const std::vector<std::uint32_t>&);
template OrderDistribution<Rational> merge_order_distribution_t<Rational>(
    const FrequencyDistribution&, const std::vector<std::uint32_t>&);

OrderDistribution<double> merge_order_distribution(const FrequencyDistribution& f,
                                                   const std::vector<std::uint32_t>& part) {
    return merge_order_distribution_t<double>(f, part);
}

template <class T>
T expected_rank_frequency_t(const FrequencyDistribution& f, std::size_t position) {
    const std::size_t n = f.size();
    require_enumerable(n);
    if (position >= n) fail(Errc::BadParameters, "position out of range");
    DrawSequence seq(n);
    std::iota(seq.begin(), seq.end(), 0u);
    T acc = scalar_from_double<T>(0.0);
    do {
        acc += permutation_probability_t<T>(f, seq) * scalar_from_double<T>(f[seq[position]]);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return acc;
}

template double expected_rank_frequency_t<double>(const FrequencyDistribution&, std::size_t);
template Rational expected_rank_frequency_t<Rational>(const FrequencyDistribution&, std::size_t);

double expected_rank_frequency(const FrequencyDistribution& f, std::size_t position) {
    return expected_rank_frequency_t<double>(f, position);
}

double expected_rank_frequency_mc(const FrequencyDistribution& f, std::size_t position,
                                  std::uint64_t trials, RandomSource& rng) {
    if (position >= f.size()) fail(Errc::BadParameters, "position out of range");
    if (trials == 0) fail(Errc::BadParameters, "need at least one trial");
    WeightedSampler sampler(f.weights());
    double acc = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        sampler.reset();
        std::size_t item = 0;
        for (std::size_t d = 0; d <= position; ++d) item = sampler.draw_and_remove(rng);
        acc += f[item];
    }
    return acc / static_cast<double>(trials);
}

}  // namespace osa
