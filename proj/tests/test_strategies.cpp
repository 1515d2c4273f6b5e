#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "osa/errors.hpp"
#include "osa/rational.hpp"
#include "osa/strategies.hpp"
#include "testutil.hpp"

using namespace osa;

namespace {

Instance two_one() { return validate_instance({2.0, 1.0}, {0.0, 1.0}); }

}  // namespace

TEST_CASE("fcfs policy always picks the cheapest vacant slot") {
    const Instance inst = validate_instance({1.0, 1.0, 1.0}, {0.0, 1.0, 2.0});
    const SlotPolicy fcfs = SlotPolicy::fcfs();
    CHECK(fcfs.choose(inst, GameState{0b111, 0b111}) == 0);
    CHECK(fcfs.choose(inst, GameState{0b011, 0b110}) == 1);
    CHECK(fcfs.choose(inst, GameState{0b001, 0b100}) == 2);
}

TEST_CASE("policies returning occupied slots are rejected") {
    const Instance inst = two_one();
    const SlotPolicy broken("always-zero", SlotPolicy::Kind::Custom,
                            [](const Instance&, const GameState&) { return 0u; });
    CHECK(broken.choose(inst, GameState{0b11, 0b11}) == 0);
    CHECK_THROWS_AS((void)broken.choose(inst, GameState{0b01, 0b10}), Error);
}

TEST_CASE("fixed order policies validate their permutation") {
    CHECK_THROWS_AS((void)SlotPolicy::fixed_order({0, 0}), Error);
    CHECK_THROWS_AS((void)SlotPolicy::fixed_order({1, 2}), Error);
    const SlotPolicy rev = SlotPolicy::fixed_order({2, 1, 0});
    const Instance inst = validate_instance({1.0, 1.0, 1.0}, {0.0, 1.0, 2.0});
    CHECK(rev.choose(inst, GameState{0b111, 0b111}) == 2);
    CHECK(rev.choose(inst, GameState{0b011, 0b011}) == 1);
}

TEST_CASE("fcfs_allocate maps the t-th distinct item to slot t") {
    const Instance inst = validate_instance({1.0, 2.0, 3.0}, {0.0, 1.0, 2.0});
    const Allocation a = fcfs_allocate(inst, {2, 0, 1});
    CHECK(a.slot_of(2) == 0);
    CHECK(a.slot_of(0) == 1);
    CHECK(a.slot_of(1) == 2);
}

TEST_CASE("exact fcfs cost on the two item instance") {
    const Instance inst = two_one();
    const EvaluationResult r = exact_expected_cost(inst, SlotPolicy::fcfs());
    CHECK(r.trials == 0);
    CHECK(r.std_error == 0.0);
    CHECK(r.expected_cost == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(exact_expected_cost_value<Rational>(inst, SlotPolicy::fcfs()) == Rational(4, 3));
}

TEST_CASE("unit weights pay the plain cost total") {
    // Every permutation fills every slot, so the weighted total is fixed.
    const Instance inst = validate_instance({1.0, 1.0, 1.0}, {0.0, 1.0, 2.0});
    CHECK(exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("constant costs give ratio one") {
    const Instance inst = validate_instance({3.0, 1.0}, {2.0, 2.0});
    const double e = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;
    CHECK(competitive_ratio(inst, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("competitive ratio requires a positive optimum") {
    const Instance inst = validate_instance({1.0}, {0.0});
    CHECK_THROWS_AS((void)competitive_ratio(inst, 1.0), Error);
}

TEST_CASE("one-set recursion agrees with the pair-state recursion") {
    // The same cheapest-vacant rule phrased as a custom policy exercises the
    // general (unseen, vacant) evaluator against the fast path.
    const SlotPolicy cheapest("cheapest-custom", SlotPolicy::Kind::Custom,
                              [](const Instance&, const GameState& s) {
                                  return static_cast<std::uint32_t>(std::countr_zero(s.vacant_slots));
                              });
    RandomSource rng(71);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rng.next_below(5);
        const Instance inst =
            testutil::random_instance(rng, n, testutil::random_sorted_costs(rng, n));
        const double fast = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;
        const double slow = exact_expected_cost(inst, cheapest).expected_cost;
        CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    }
}

TEST_CASE("cheapest-first is the optimal stateless rule") {
    RandomSource rng(73);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 2 + rng.next_below(5);
        const Instance inst =
            testutil::random_instance(rng, n, testutil::random_sorted_costs(rng, n));
        const double fcfs = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;
        const OptimalStateless best = optimal_stateless(inst);
        CHECK(best.value == doctest::Approx(fcfs).epsilon(1e-9));
        // The returned argmin policy actually achieves the value.
        CHECK(exact_expected_cost(inst, best.policy).expected_cost ==
              doctest::Approx(best.value).epsilon(1e-12));
    }
}

TEST_CASE("any other fixed slot order costs at least as much") {
    RandomSource rng(79);
    for (int rep = 0; rep < 15; ++rep) {
        const std::size_t n = 3 + rng.next_below(3);
        const Instance inst =
            testutil::random_instance(rng, n, testutil::random_sorted_costs(rng, n));
        const double fcfs = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        do {
            const double cost =
                exact_expected_cost(inst, SlotPolicy::fixed_order(order)).expected_cost;
            CHECK(cost >= fcfs - 1e-12);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("exact evaluators enforce their size caps") {
    const std::size_t big = 21;
    const Instance inst = validate_instance(std::vector<double>(big, 1.0),
                                            std::vector<double>(big, 1.0));
    CHECK_THROWS_AS((void)exact_expected_cost(inst, SlotPolicy::fcfs()), Error);
    const std::size_t mid = 11;
    const Instance inst2 = validate_instance(std::vector<double>(mid, 1.0),
                                             std::vector<double>(mid, 1.0));
    CHECK_THROWS_AS((void)optimal_stateless(inst2), Error);
}

TEST_CASE("monte carlo matches the exact value and is thread invariant") {
    RandomSource rng(83);
    const Instance inst = testutil::random_instance(rng, 6, testutil::random_sorted_costs(rng, 6));
    const double exact = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;

    const EvaluationResult one =
        monte_carlo_expected_cost(inst, SlotPolicy::fcfs(), 20000, 99, 1);
    const EvaluationResult four =
        monte_carlo_expected_cost(inst, SlotPolicy::fcfs(), 20000, 99, 4);
    CHECK(one.expected_cost == four.expected_cost);  // bitwise, by merge order
    CHECK(one.std_error == four.std_error);
    CHECK(one.trials == 20000);
    CHECK(std::abs(one.expected_cost - exact) <= 4.0 * one.std_error);

    const EvaluationResult single =
        monte_carlo_expected_cost(inst, SlotPolicy::fcfs(), 1, 99, 1);
    CHECK(single.degenerate);
}

TEST_CASE("request streams allocate like fcfs on the distinct order") {
    const Instance inst = validate_instance({5.0, 1.0, 1.0}, {0.0, 1.0, 3.0});
    RandomSource rng(101);
    const StreamResult run = simulate_request_stream(inst, SlotPolicy::fcfs(), rng);
    CHECK(run.allocation.total());
    CHECK(run.total_requests >= inst.size());

    // Long-run average allocation cost approaches the exact expectation.
    const double exact = exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost;
    double sum = 0.0;
    const int reps = 4000;
    for (int i = 0; i < reps; ++i) {
        RandomSource r = RandomSource::derive(300, static_cast<std::uint64_t>(i));
        sum += allocation_cost(inst, simulate_request_stream(inst, SlotPolicy::fcfs(), r).allocation);
    }
    CHECK(sum / reps == doctest::Approx(exact).epsilon(0.05));

    // A cap too small to see every item raises an error.
    const Instance skew = validate_instance({1000.0, 1.0}, {0.0, 1.0});
    RandomSource r2(7);
    StreamOptions opts;
    opts.request_cap = 2;
    CHECK_THROWS_AS((void)simulate_request_stream(skew, SlotPolicy::fcfs(), r2, opts), Error);
}

TEST_CASE("thread count resolution respects the environment cap") {
    CHECK(resolve_thread_count(0) >= 1);
    CHECK(resolve_thread_count(3) >= 1);
    ::setenv("OSA_LAB_THREADS", "2", 1);
    CHECK(resolve_thread_count(0) <= 2);
    CHECK(resolve_thread_count(8) <= 2);
    ::unsetenv("OSA_LAB_THREADS");
}
