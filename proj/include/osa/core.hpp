#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "osa/errors.hpp"

namespace osa {

// Items and slots are 0-based everywhere: in the API, in JSON/CSV output and
// in reported allocations.

// Positive item weights. Normalization is not required; every operation that
// needs probabilities normalizes internally.
class FrequencyDistribution {
public:
    explicit FrequencyDistribution(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    double total() const { return total_; }

    // Weights scaled to sum to 1 (within roundoff).
    std::vector<double> normalized() const;

private:
    std::vector<double> weights_;
    double total_;
};

// Non-negative, non-decreasing slot costs: c[0] <= c[1] <= ... <= c[n-1].
class CostVector {
public:
    explicit CostVector(std::vector<double> costs);

    std::size_t size() const { return costs_.size(); }
    double operator[](std::size_t i) const { return costs_[i]; }
    const std::vector<double>& costs() const { return costs_; }

    // Sorts the input first and reports the applied permutation: perm[k] is
    // the original position of the k-th cheapest cost.
    static CostVector sorted_from(std::vector<double> costs,
                                  std::vector<std::size_t>* perm = nullptr);

private:
    std::vector<double> costs_;
};

struct Instance {
    FrequencyDistribution f;
    CostVector c;

    std::size_t size() const { return f.size(); }
};

struct ValidateOptions {
    // When set, an unsorted cost vector is sorted instead of rejected.
    bool sort_costs = false;
};

// Checks lengths, weight positivity and cost monotonicity. With
// opts.sort_costs the permutation applied to the costs is written to
// *cost_perm when provided.
Instance validate_instance(std::vector<double> weights, std::vector<double> costs,
                           ValidateOptions opts = {},
                           std::vector<std::size_t>* cost_perm = nullptr);

// Injective partial map from items to slots.
class Allocation {
public:
    explicit Allocation(std::size_t n);

    static Allocation identity(std::size_t n);

    std::size_t size() const { return slot_of_.size(); }
    bool assigned(std::size_t item) const { return slot_of_[item].has_value(); }
    bool total() const { return assigned_count_ == slot_of_.size(); }

    // Throws NotAPermutation when the slot is taken or the item already
    // placed; indexes are range-checked.
    void assign(std::size_t item, std::size_t slot);

    // Throws PartialAllocation when the item is unassigned.
    std::size_t slot_of(std::size_t item) const;

private:
    std::vector<std::optional<std::uint32_t>> slot_of_;
    std::vector<bool> slot_used_;
    std::size_t assigned_count_ = 0;
};

// Sum of f[i] * c[alloc(i)]. The allocation must be total.
double allocation_cost(const Instance& inst, const Allocation& alloc);

struct OptimalAllocation {
    double cost;
    Allocation allocation;
};

// Offline optimum: heaviest item on the cheapest slot. Ties between equal
// weights go to the lower item index.
OptimalAllocation opt_cost(const Instance& inst);

enum class CostClass { ZeroOne, Concave, Logarithmic, General };

struct LogCostTemplate {
    // Accept c[j] when |c[j] - log2(j+1)| <= slack for all j.
    double slack = 0.0;
};

// Most specific class wins: Concave before ZeroOne before General.
// Logarithmic is only reported when a template is supplied and matches.
CostClass classify_cost_vector(const CostVector& c);
CostClass classify_cost_vector(const CostVector& c, const LogCostTemplate& tmpl);

const char* cost_class_name(CostClass cls);

}  // namespace osa
