#include "osa/strategies.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <thread>
#include <unordered_map>

namespace osa {

namespace {

constexpr std::size_t kMaxFcfsExact = 20;
constexpr std::size_t kMaxGeneralExact = 10;
constexpr std::size_t kMaxMaskGame = 32;

std::uint64_t pair_key(std::uint32_t unseen, std::uint32_t vacant) {
    return (static_cast<std::uint64_t>(unseen) << 32) | vacant;
}

}  // namespace

SlotPolicy::SlotPolicy(std::string name, Kind kind, ChooseFn choose)
    : name_(std::move(name)), kind_(kind), choose_(std::move(choose)) {
    if (!choose_) fail(Errc::BadParameters, "policy needs a choose function");
}

SlotPolicy SlotPolicy::fcfs() {
    return SlotPolicy("fcfs", Kind::Fcfs, [](const Instance&, const GameState& state) {
        return static_cast<std::uint32_t>(std::countr_zero(state.vacant_slots));
    });
}

SlotPolicy SlotPolicy::fixed_order(std::vector<std::uint32_t> slot_order) {
    DrawSequence as_seq(slot_order.begin(), slot_order.end());
    if (!is_permutation_sequence(as_seq, slot_order.size()))
        fail(Errc::NotAPermutation, "slot order must be a permutation of the slots");
    return SlotPolicy(
        "fixed-order", Kind::Custom,
        [order = std::move(slot_order)](const Instance& inst, const GameState& state) {
            const std::size_t used =
                inst.size() - static_cast<std::size_t>(std::popcount(state.vacant_slots));
            return order[used];
        });
}

std::uint32_t SlotPolicy::choose(const Instance& inst, const GameState& state) const {
    const std::uint32_t slot = choose_(inst, state);
    if (slot >= inst.size() || ((state.vacant_slots >> slot) & 1u) == 0)
        fail(Errc::BadParameters, "policy picked a slot that is not vacant");
    return slot;
}

Allocation fcfs_allocate(const Instance& inst, const DrawSequence& order) {
    if (!is_permutation_sequence(order, inst.size()))
        fail(Errc::NotAPermutation, "order must be a permutation of the items");
    Allocation alloc(inst.size());
    for (std::size_t t = 0; t < order.size(); ++t) alloc.assign(order[t], t);
    return alloc;
}

StreamResult simulate_request_stream(const Instance& inst, const SlotPolicy& policy,
                                     RandomSource& rng, StreamOptions opts) {
    const std::size_t n = inst.size();
    const bool fcfs = policy.kind() == SlotPolicy::Kind::Fcfs;
    if (!fcfs && n > kMaxMaskGame)
        fail(Errc::TooLarge, "request streams with custom policies are capped at 32 items");

    std::uint64_t cap = opts.request_cap;
    if (cap == 0) {
        double min_w = inst.f[0];
        for (std::size_t i = 1; i < n; ++i) min_w = std::min(min_w, inst.f[i]);
        cap = static_cast<std::uint64_t>(std::ceil(
            50.0 * (inst.f.total() / min_w) *
            std::log(static_cast<double>(std::max<std::size_t>(n, 2)))));
        cap = std::max<std::uint64_t>(cap, n);
    }

    std::vector<double> prefix(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += inst.f[i];
        prefix[i] = acc;
    }

    Allocation alloc(n);
    std::vector<char> seen(n, 0);
    std::size_t distinct = 0;
    GameState state{0, 0};
    if (!fcfs) {
        state.unseen_items = n == 32 ? 0xffffffffu : ((1u << n) - 1u);
        state.vacant_slots = state.unseen_items;
    }

    std::uint64_t requests = 0;
    while (distinct < n) {
        if (requests >= cap)
            fail(Errc::CapExceeded, "request cap hit before every item appeared");
        ++requests;
        const double u = rng.next_unit() * acc;
        auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
        std::size_t item = static_cast<std::size_t>(it - prefix.begin());
        if (item >= n) item = n - 1;
        if (seen[item]) continue;
        seen[item] = 1;
        std::size_t slot;
        if (fcfs) {
            slot = distinct;
        } else {
            slot = policy.choose(inst, state);
            state.unseen_items &= ~(1u << item);
            state.vacant_slots &= ~(1u << slot);
        }
        alloc.assign(item, slot);
        ++distinct;
    }
    return StreamResult{std::move(alloc), requests};
}

namespace {

// One-set recursion: under FCFS the vacant set is determined by how many
// items are already placed, so states are just the unseen-item masks.
template <class T>
T fcfs_exact(const Instance& inst) {
    const std::size_t n = inst.size();
    if (n > kMaxFcfsExact) fail(Errc::TooLarge, "exact evaluation is capped at 20 items");
    std::vector<T> weight(n);
    for (std::size_t i = 0; i < n; ++i) weight[i] = scalar_from_double<T>(inst.f[i]);
    std::vector<T> cost(n);
    for (std::size_t j = 0; j < n; ++j) cost[j] = scalar_from_double<T>(inst.c[j]);

    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<T> table(full + 1, scalar_from_double<T>(0.0));
    for (std::size_t mask = 1; mask <= full; ++mask) {
        const int k = std::popcount(mask);
        const T& slot_cost = cost[n - static_cast<std::size_t>(k)];
        T fw = scalar_from_double<T>(0.0);
        T sum = scalar_from_double<T>(0.0);
        std::size_t rest = mask;
        while (rest != 0) {
            const std::size_t low = rest & (0 - rest);
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(low));
            fw += weight[i];
            sum += weight[i] * (weight[i] * slot_cost + table[mask ^ low]);
            rest ^= low;
        }
        table[mask] = sum / fw;
    }
    return table[full];
}

}  // namespace

template <class T>
T exact_expected_cost_value(const Instance& inst, const SlotPolicy& policy) {
    const std::size_t n = inst.size();
    if (policy.kind() == SlotPolicy::Kind::Fcfs) return fcfs_exact<T>(inst);
    if (n > kMaxGeneralExact)
        fail(Errc::TooLarge, "exact evaluation of custom policies is capped at 10 items");

    std::vector<T> weight(n), cost(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = scalar_from_double<T>(inst.f[i]);
        cost[i] = scalar_from_double<T>(inst.c[i]);
    }
    std::unordered_map<std::uint64_t, T> memo;
    auto eval = [&](auto&& self, std::uint32_t unseen, std::uint32_t vacant) -> T {
        if (unseen == 0) return scalar_from_double<T>(0.0);
        const std::uint64_t key = pair_key(unseen, vacant);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const std::uint32_t slot = policy.choose(inst, GameState{unseen, vacant});
        const std::uint32_t next_vacant = vacant & ~(1u << slot);
        T fw = scalar_from_double<T>(0.0);
        T sum = scalar_from_double<T>(0.0);
        std::uint32_t rest = unseen;
        while (rest != 0) {
            const std::uint32_t low = rest & (0 - rest);
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(low));
            fw += weight[i];
            sum += weight[i] * (weight[i] * cost[slot] + self(self, unseen ^ low, next_vacant));
            rest ^= low;
        }
        T value = sum / fw;
        memo.emplace(key, value);
        return value;
    };
    const std::uint32_t full = n == 32 ? 0xffffffffu : ((1u << n) - 1u);
    return eval(eval, full, full);
}

template double exact_expected_cost_value<double>(const Instance&, const SlotPolicy&);
template Rational exact_expected_cost_value<Rational>(const Instance&, const SlotPolicy&);

EvaluationResult exact_expected_cost(const Instance& inst, const SlotPolicy& policy) {
    return EvaluationResult{exact_expected_cost_value<double>(inst, policy), 0.0, 0, false};
}

namespace {

template <class T>
struct StatelessDp {
    const Instance& inst;
    std::vector<T> weight, cost;
    std::unordered_map<std::uint64_t, T> value;
    std::unordered_map<std::uint64_t, std::uint32_t> best;

    explicit StatelessDp(const Instance& instance) : inst(instance) {
        const std::size_t n = inst.size();
        weight.resize(n);
        cost.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            weight[i] = scalar_from_double<T>(inst.f[i]);
            cost[i] = scalar_from_double<T>(inst.c[i]);
        }
    }

    T solve(std::uint32_t unseen, std::uint32_t vacant) {
        if (unseen == 0) return scalar_from_double<T>(0.0);
        const std::uint64_t key = pair_key(unseen, vacant);
        if (auto it = value.find(key); it != value.end()) return it->second;
        T fw = scalar_from_double<T>(0.0);
        for (std::uint32_t rest = unseen; rest != 0; rest &= rest - 1)
            fw += weight[static_cast<std::size_t>(std::countr_zero(rest))];

        bool have = false;
        T best_value = scalar_from_double<T>(0.0);
        std::uint32_t best_slot = 0;
        for (std::uint32_t slots = vacant; slots != 0; slots &= slots - 1) {
            const std::uint32_t slot = static_cast<std::uint32_t>(std::countr_zero(slots));
            const std::uint32_t next_vacant = vacant & ~(1u << slot);
            T sum = scalar_from_double<T>(0.0);
            for (std::uint32_t rest = unseen; rest != 0; rest &= rest - 1) {
                const std::uint32_t low = rest & (0 - rest);
                const std::size_t i = static_cast<std::size_t>(std::countr_zero(low));
                sum += weight[i] * (weight[i] * cost[slot] + solve(unseen ^ low, next_vacant));
            }
            T candidate = sum / fw;
            if (!have || candidate < best_value) {
                have = true;
                best_value = candidate;
                best_slot = slot;
            }
        }
        value.emplace(key, best_value);
        best.emplace(key, best_slot);
        return best_value;
    }
};

}  // namespace

template <class T>
T optimal_stateless_value(const Instance& inst) {
    const std::size_t n = inst.size();
    if (n > kMaxGeneralExact) fail(Errc::TooLarge, "stateless optimum is capped at 10 items");
    StatelessDp<T> dp(inst);
    const std::uint32_t full = (1u << n) - 1u;
    return dp.solve(full, full);
}

template double optimal_stateless_value<double>(const Instance&);
template Rational optimal_stateless_value<Rational>(const Instance&);

OptimalStateless optimal_stateless(const Instance& inst) {
    const std::size_t n = inst.size();
    if (n > kMaxGeneralExact) fail(Errc::TooLarge, "stateless optimum is capped at 10 items");
    auto dp = std::make_shared<StatelessDp<double>>(inst);
    const std::uint32_t full = (1u << n) - 1u;
    const double value = dp->solve(full, full);
    SlotPolicy policy("optimal-stateless", SlotPolicy::Kind::Custom,
                      [dp](const Instance&, const GameState& state) {
                          const std::uint64_t key = pair_key(state.unseen_items, state.vacant_slots);
                          if (auto it = dp->best.find(key); it != dp->best.end()) return it->second;
                          dp->solve(state.unseen_items, state.vacant_slots);
                          return dp->best.at(key);
                      });
    return OptimalStateless{value, std::move(policy)};
}

namespace {

double mc_one_trial_fcfs(const Instance& inst, WeightedSampler& sampler, RandomSource& rng) {
    sampler.reset();
    double cost = 0.0;
    const std::size_t n = inst.size();
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t item = sampler.draw_and_remove(rng);
        cost += inst.f[item] * inst.c[t];
    }
    return cost;
}

double mc_one_trial_game(const Instance& inst, const SlotPolicy& policy, WeightedSampler& sampler,
                         RandomSource& rng) {
    sampler.reset();
    const std::size_t n = inst.size();
    const std::uint32_t full = n == 32 ? 0xffffffffu : ((1u << n) - 1u);
    GameState state{full, full};
    double cost = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::uint32_t slot = policy.choose(inst, state);
        const std::size_t item = sampler.draw_and_remove(rng);
        cost += inst.f[item] * inst.c[slot];
        state.unseen_items &= ~(1u << item);
        state.vacant_slots &= ~(1u << slot);
    }
    return cost;
}

}  // namespace

int resolve_thread_count(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int cap = hw;
    if (const char* env = std::getenv("OSA_LAB_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) cap = parsed;
    }
    if (requested <= 0) return std::min(hw, cap);
    return std::min(requested, cap);
}

EvaluationResult monte_carlo_expected_cost(const Instance& inst, const SlotPolicy& policy,
                                           std::uint64_t trials, std::uint64_t seed, int threads) {
    if (trials == 0) fail(Errc::BadParameters, "need at least one trial");
    const bool fcfs = policy.kind() == SlotPolicy::Kind::Fcfs;
    if (!fcfs && inst.size() > kMaxMaskGame)
        fail(Errc::TooLarge, "Monte Carlo with custom policies is capped at 32 items");

    // Fixed-size blocks keep the trial -> block map independent of the
    // thread count; blocks are merged in index order, so results for a
    // given seed are bit-identical however the work is scheduled.
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t num_blocks = (trials + kBlock - 1) / kBlock;
    std::vector<double> block_sum(num_blocks, 0.0);
    std::vector<double> block_sumsq(num_blocks, 0.0);

    const int workers = std::max(
        1, std::min<int>(resolve_thread_count(threads), static_cast<int>(std::min<std::uint64_t>(
                                                            num_blocks, 1u << 16))));
    std::atomic<std::uint64_t> next_block{0};
    auto run = [&]() {
        WeightedSampler sampler(inst.f.weights());
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= num_blocks) return;
            const std::uint64_t begin = b * kBlock;
            const std::uint64_t end = std::min(trials, begin + kBlock);
            double sum = 0.0;
            double sumsq = 0.0;
            for (std::uint64_t t = begin; t < end; ++t) {
                RandomSource rng = RandomSource::derive(seed, t);
                const double cost = fcfs ? mc_one_trial_fcfs(inst, sampler, rng)
                                         : mc_one_trial_game(inst, policy, sampler, rng);
                sum += cost;
                sumsq += cost * cost;
            }
            block_sum[b] = sum;
            block_sumsq[b] = sumsq;
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    double sumsq = 0.0;
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        sum += block_sum[b];
        sumsq += block_sumsq[b];
    }
    const double mean = sum / static_cast<double>(trials);
    EvaluationResult result;
    result.expected_cost = mean;
    result.trials = trials;
    if (trials == 1) {
        result.degenerate = true;
        result.std_error = 0.0;
    } else {
        const double nf = static_cast<double>(trials);
        double variance = (sumsq - nf * mean * mean) / (nf - 1.0);
        if (variance < 0.0) variance = 0.0;
        result.std_error = std::sqrt(variance / nf);
    }
    return result;
}

double competitive_ratio(const Instance& inst, double expected_cost) {
    const double opt = opt_cost(inst).cost;
    if (!(opt > 0.0)) fail(Errc::ZeroOptimum, "offline optimum is zero");
    return expected_cost / opt;
}

}  // namespace osa
