#include "osa/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace osa {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::NonPositiveWeight: return "NonPositiveWeight";
        case Errc::DecreasingCosts: return "DecreasingCosts";
        case Errc::PartialAllocation: return "PartialAllocation";
        case Errc::NotAPermutation: return "NotAPermutation";
        case Errc::TooLarge: return "TooLarge";
        case Errc::ZeroOptimum: return "ZeroOptimum";
        case Errc::BadParameters: return "BadParameters";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::InvalidPrefix: return "InvalidPrefix";
        case Errc::TruncatedStream: return "TruncatedStream";
        case Errc::BadHeader: return "BadHeader";
        case Errc::SymbolTooWide: return "SymbolTooWide";
        case Errc::BadSpec: return "BadSpec";
        case Errc::IoError: return "IoError";
        case Errc::EmptyCorpus: return "EmptyCorpus";
    }
    return "Unknown";
}

FrequencyDistribution::FrequencyDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) fail(Errc::LengthMismatch, "need at least one item weight");
    total_ = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w))
            fail(Errc::NonPositiveWeight, "item weights must be finite and positive");
        total_ += w;
    }
}

std::vector<double> FrequencyDistribution::normalized() const {
    std::vector<double> q(weights_);
    for (double& w : q) w /= total_;
    return q;
}

CostVector::CostVector(std::vector<double> costs) : costs_(std::move(costs)) {
    if (costs_.empty()) fail(Errc::LengthMismatch, "need at least one slot cost");
    double prev = 0.0;
    for (double c : costs_) {
        if (!(c >= 0.0) || !std::isfinite(c))
            fail(Errc::DecreasingCosts, "slot costs must be finite and non-negative");
        if (c < prev) fail(Errc::DecreasingCosts, "slot costs must be non-decreasing");
        prev = c;
    }
}

CostVector CostVector::sorted_from(std::vector<double> costs, std::vector<std::size_t>* perm) {
    std::vector<std::size_t> order(costs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
    std::vector<double> sorted(costs.size());
    for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = costs[order[k]];
    if (perm) *perm = order;
    return CostVector(std::move(sorted));
}

Instance validate_instance(std::vector<double> weights, std::vector<double> costs,
                           ValidateOptions opts, std::vector<std::size_t>* cost_perm) {
    if (weights.size() != costs.size())
        fail(Errc::LengthMismatch, "weights and costs must have equal length");
    FrequencyDistribution f(std::move(weights));
    if (opts.sort_costs)
        return Instance{std::move(f), CostVector::sorted_from(std::move(costs), cost_perm)};
    if (cost_perm) {
        cost_perm->resize(costs.size());
        std::iota(cost_perm->begin(), cost_perm->end(), std::size_t{0});
    }
    return Instance{std::move(f), CostVector(std::move(costs))};
}

Allocation::Allocation(std::size_t n) : slot_of_(n), slot_used_(n, false) {
    if (n == 0) fail(Errc::LengthMismatch, "allocation needs at least one item");
}

Allocation Allocation::identity(std::size_t n) {
    Allocation a(n);
    for (std::size_t i = 0; i < n; ++i) a.assign(i, i);
    return a;
}

void Allocation::assign(std::size_t item, std::size_t slot) {
    if (item >= slot_of_.size() || slot >= slot_used_.size())
        fail(Errc::NotAPermutation, "item or slot index out of range");
    if (slot_of_[item].has_value()) fail(Errc::NotAPermutation, "item already assigned");
    if (slot_used_[slot]) fail(Errc::NotAPermutation, "slot already occupied");
    slot_of_[item] = static_cast<std::uint32_t>(slot);
    slot_used_[slot] = true;
    ++assigned_count_;
}

std::size_t Allocation::slot_of(std::size_t item) const {
    if (item >= slot_of_.size()) fail(Errc::NotAPermutation, "item index out of range");
    if (!slot_of_[item].has_value()) fail(Errc::PartialAllocation, "item has no slot");
    return *slot_of_[item];
}

double allocation_cost(const Instance& inst, const Allocation& alloc) {
    if (alloc.size() != inst.size())
        fail(Errc::LengthMismatch, "allocation size differs from instance size");
    if (!alloc.total()) fail(Errc::PartialAllocation, "allocation does not place every item");
    double cost = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i)
        cost += inst.f[i] * inst.c[alloc.slot_of(i)];
    return cost;
}

OptimalAllocation opt_cost(const Instance& inst) {
    const std::size_t n = inst.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return inst.f[a] > inst.f[b]; });
    Allocation alloc(n);
    double cost = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        alloc.assign(order[k], k);
        cost += inst.f[order[k]] * inst.c[k];
    }
    return OptimalAllocation{cost, std::move(alloc)};
}

namespace {

bool is_zero_one(const CostVector& c) {
    for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j] != 0.0 && c[j] != 1.0) return false;
    return true;
}

bool is_concave(const CostVector& c) {
    // Differences must be non-increasing; single-slot vectors are concave.
    for (std::size_t j = 0; j + 2 < c.size(); ++j)
        if (c[j + 2] - c[j + 1] > c[j + 1] - c[j]) return false;
    return true;
}

}  // namespace

CostClass classify_cost_vector(const CostVector& c) {
    if (is_concave(c)) return CostClass::Concave;
    if (is_zero_one(c)) return CostClass::ZeroOne;
    return CostClass::General;
}

CostClass classify_cost_vector(const CostVector& c, const LogCostTemplate& tmpl) {
    bool logarithmic = true;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (std::abs(c[j] - std::log2(static_cast<double>(j + 1))) > tmpl.slack) {
            logarithmic = false;
            break;
        }
    }
    if (logarithmic) return CostClass::Logarithmic;
    return classify_cost_vector(c);
}

const char* cost_class_name(CostClass cls) {
    switch (cls) {
        case CostClass::ZeroOne: return "zero-one";
        case CostClass::Concave: return "concave";
        case CostClass::Logarithmic: return "logarithmic";
        case CostClass::General: return "general";
    }
    return "unknown";
}

}  // namespace osa
