#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "osa/core.hpp"
#include "osa/rational.hpp"

namespace osa {

// Order in which distinct items first appear: position t holds the t-th
// distinct item. A full sequence is a permutation of 0..n-1.
using DrawSequence = std::vector<std::uint32_t>;

bool is_permutation_sequence(const DrawSequence& seq, std::size_t n);

// Deterministic 64-bit generator. The same seed yields the same stream on
// every platform; unit doubles take the top 53 bits, so results do not
// depend on the standard library's distribution implementations.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

    // Independent stream for a given trial index; used to make parallel
    // Monte Carlo runs independent of the thread count.
    static RandomSource derive(std::uint64_t base_seed, std::uint64_t stream);

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

// Cumulative-weight inversion over a Fenwick tree: O(log n) per draw and
// per removal. reset() restores the initial weights in O(n).
class WeightedSampler {
public:
    explicit WeightedSampler(std::span<const double> weights);

    std::size_t size() const { return n_; }
    std::size_t remaining() const { return remaining_; }
    double total() const;
    double weight(std::size_t item) const { return leaf_[item]; }

    void remove(std::size_t item);
    std::size_t draw_and_remove(RandomSource& rng);
    void reset();

private:
    std::size_t lower_bound(double target) const;

    std::size_t n_;
    std::size_t remaining_;
    std::vector<double> leaf_;
    std::vector<double> tree_;
    std::vector<double> initial_leaf_;
    std::vector<double> initial_tree_;
};

// Samples a full without-replacement order: each draw picks an item with
// probability proportional to its weight among the remaining ones.
DrawSequence draw_without_replacement(const FrequencyDistribution& f, RandomSource& rng);

// Probability of observing exactly this order, as a product over positions
// of weight over remaining total.
template <class T>
T permutation_probability_t(const FrequencyDistribution& f, const DrawSequence& seq);

double permutation_probability(const FrequencyDistribution& f, const DrawSequence& seq);
Rational permutation_probability_exact(const FrequencyDistribution& f, const DrawSequence& seq);

// Lehmer rank of a permutation and its inverse; used to index dense
// order distributions.
std::uint64_t permutation_index(const DrawSequence& seq);
DrawSequence permutation_from_index(std::size_t n, std::uint64_t index);
std::uint64_t factorial(std::size_t n);

// Dense distribution over all n! orders, indexed by Lehmer rank.
template <class T>
struct OrderDistribution {
    std::size_t n = 0;
    std::vector<T> prob;

    const T& of(const DrawSequence& seq) const { return prob[permutation_index(seq)]; }
};

// Exhaustive order distribution; n <= 9 (throws TooLarge beyond).
template <class T>
OrderDistribution<T> exact_order_distribution_t(const FrequencyDistribution& f);

OrderDistribution<double> exact_order_distribution(const FrequencyDistribution& f);
OrderDistribution<Rational> exact_order_distribution_exact(const FrequencyDistribution& f);

// Draws a full order by recursively permuting a part and its complement,
// then interleaving them with weight-proportional coin flips. Distributes
// identically to draw_without_replacement. `part` lists item ids; an empty
// or full part degenerates to plain sampling.
DrawSequence merge_sample(const FrequencyDistribution& f, const std::vector<std::uint32_t>& part,
                          RandomSource& rng);

// Exact distribution of merge_sample obtained by enumerating every coin
// branch of the same recursion; n <= 9.
template <class T>
OrderDistribution<T> merge_order_distribution_t(const FrequencyDistribution& f,
                                                const std::vector<std::uint32_t>& part);

OrderDistribution<double> merge_order_distribution(const FrequencyDistribution& f,
                                                   const std::vector<std::uint32_t>& part);

// E[f(i_t)] for 0-based position t, by exhaustive enumeration; n <= 9.
template <class T>
T expected_rank_frequency_t(const FrequencyDistribution& f, std::size_t position);

double expected_rank_frequency(const FrequencyDistribution& f, std::size_t position);

// Monte Carlo estimate of the same quantity.
double expected_rank_frequency_mc(const FrequencyDistribution& f, std::size_t position,
                                  std::uint64_t trials, RandomSource& rng);

}  // namespace osa
