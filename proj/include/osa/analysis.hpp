#pragma once

#include <cstdint>
#include <vector>

#include "osa/core.hpp"

namespace osa {

// H_k = 1 + 1/2 + ... + 1/k, summed small terms first. H_0 = 0.
double harmonic(std::uint64_t k);

// Shannon entropy in bits of the normalized weights.
double entropy(const FrequencyDistribution& f);

// Number of slots cheaper than the most expensive one. This is the K in the
// 1 + H_K guarantee for arbitrary cost vectors.
std::size_t non_maximum_slots(const CostVector& c);

enum class BoundKind { GeneralHk, Concave2, LogEntropy, OhcGuarantee };

struct BoundReport {
    BoundKind kind;
    double value;      // the bound itself
    double parameter;  // K for GeneralHk, H for the entropy-based bounds
};

// Ratio bound 1 + H_K valid for every cost vector.
BoundReport general_cost_bound(const CostVector& c);

// Ratio bound 2 for concave cost vectors.
BoundReport concave_cost_bound();

// Absolute bound H + 2*log2(1 + H) + 2 on expected bits per symbol.
double ohc_guarantee(double entropy_bits);
BoundReport ohc_guarantee_bound(double entropy_bits);

// Expected-cost bound for costs within `slack` of log2(j+1) (0-based j,
// so the rank-r slot costs about log2 r): entropy + slack. Follows from
// E[log2 of the first-appearance position] <= log2(1 / normalized weight).
BoundReport log_cost_bound(double entropy_bits, double slack);

const char* bound_kind_name(BoundKind kind);

// Sum of 2^-len over the given codeword lengths, accumulated smallest terms
// first with compensation.
double kraft_sum(const std::vector<std::uint32_t>& lengths);

// Instance family that forces a ratio near 1 + H_K: K free slots, K heavy
// items of weight 1 and n - K light items sharing weight eps. Requires
// 1 <= K < n and eps in (0, 1).
Instance lower_bound_instance_general(std::size_t K, std::size_t n, double eps);

// Concave family with FCFS ratio at least 2 / (1 + (n - 1) * eps): one free
// slot, unit-cost remainder, one heavy item and n - 1 items of weight eps.
Instance lower_bound_instance_concave(std::size_t n, double eps);

// Exact FCFS-to-optimum ratio of the concave family above:
// (2 + (n-2)*eps) / (1 + (n-1)*eps). Conditioning on whether the heavy item
// arrives first gives expected cost
// (n-1)*eps*(2 + (n-2)*eps) / (1 + (n-1)*eps) against an optimum of
// (n-1)*eps.
double concave_family_exact_ratio(std::size_t n, double eps);

// Certified lower bound on the same ratio, 2 / (1 + (n-1)*eps), obtained by
// charging only the heavy item when it misses the free slot. Tends to 2 as
// eps -> 0.
double concave_family_ratio_lower_bound(std::size_t n, double eps);

struct RankBound {
    double expected_position;  // expected 1-based first-appearance position
    double bound;              // 1 / normalized weight
};

// E[position of item] = 1 + sum over other items h of f_h / (f_i + f_h),
// always at most 1 / q_i.
RankBound expected_rank_bound(const FrequencyDistribution& f, std::size_t item);

// Probability that item h appears before item i: f_h / (f_i + f_h).
double before_probability(const FrequencyDistribution& f, std::size_t h, std::size_t i);

}  // namespace osa
