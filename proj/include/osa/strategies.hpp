#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "osa/core.hpp"
#include "osa/rational.hpp"
#include "osa/sampling.hpp"

namespace osa {

// State of the compact allocation game, encoded as bitmasks; usable for
// n <= 32. Both sets always have equal size: one item and one slot leave
// the game per step.
struct GameState {
    std::uint32_t unseen_items;
    std::uint32_t vacant_slots;
};

// A stateless slot-picking rule: sees only the instance and the current
// state, never the request history.
class SlotPolicy {
public:
    enum class Kind { Fcfs, Custom };
    using ChooseFn = std::function<std::uint32_t(const Instance&, const GameState&)>;

    SlotPolicy(std::string name, Kind kind, ChooseFn choose);

    // Lowest-index vacant slot, i.e. the cheapest one.
    static SlotPolicy fcfs();

    // Walks a fixed slot order: the t-th distinct item gets slot_order[t].
    static SlotPolicy fixed_order(std::vector<std::uint32_t> slot_order);

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }

    // Returns the chosen slot and verifies it is actually vacant.
    std::uint32_t choose(const Instance& inst, const GameState& state) const;

private:
    std::string name_;
    Kind kind_;
    ChooseFn choose_;
};

// Assigns the t-th distinct item of the order to slot t.
Allocation fcfs_allocate(const Instance& inst, const DrawSequence& order);

struct StreamOptions {
    // 0 means the default cap: ceil(50 * (total weight / min weight) *
    // ln(max(n, 2))), never below n. Hitting the cap before all items have
    // appeared raises CapExceeded.
    std::uint64_t request_cap = 0;
};

struct StreamResult {
    Allocation allocation;
    std::uint64_t total_requests;
};

// Draws i.i.d. requests from f and routes each first occurrence through the
// policy. Non-FCFS policies need n <= 32 for the mask-based game state.
StreamResult simulate_request_stream(const Instance& inst, const SlotPolicy& policy,
                                     RandomSource& rng, StreamOptions opts = {});

struct EvaluationResult {
    double expected_cost = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;  // 0 for exact evaluations
    bool degenerate = false;   // single-trial runs report no spread
};

// Expected game cost under the policy, by subset dynamic programming.
// FCFS admits a one-set recursion (n <= 20); arbitrary policies walk
// (unseen, vacant) pairs (n <= 10).
template <class T>
T exact_expected_cost_value(const Instance& inst, const SlotPolicy& policy);

EvaluationResult exact_expected_cost(const Instance& inst, const SlotPolicy& policy);

struct OptimalStateless {
    double value;
    SlotPolicy policy;
};

// Cheapest expected cost achievable by any stateless rule, with an argmin
// policy; ties pick the lowest slot index. n <= 10.
OptimalStateless optimal_stateless(const Instance& inst);

template <class T>
T optimal_stateless_value(const Instance& inst);

// Trial-parallel Monte Carlo; results are byte-identical for a given seed
// regardless of thread count. threads <= 0 picks a hardware default capped
// by the OSA_LAB_THREADS environment variable.
EvaluationResult monte_carlo_expected_cost(const Instance& inst, const SlotPolicy& policy,
                                           std::uint64_t trials, std::uint64_t seed,
                                           int threads = 1);

// expected_cost / opt_cost. The optimum must be positive.
double competitive_ratio(const Instance& inst, double expected_cost);

// Resolves a requested thread count against hardware and OSA_LAB_THREADS.
int resolve_thread_count(int requested);

}  // namespace osa
