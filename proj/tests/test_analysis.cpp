#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "osa/analysis.hpp"
#include "osa/errors.hpp"
#include "osa/sampling.hpp"
#include "osa/strategies.hpp"
#include "testutil.hpp"

using namespace osa;

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == doctest::Approx(1.0));
    CHECK(harmonic(3) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(harmonic(1000) == doctest::Approx(7.485470860550343).epsilon(1e-12));
}

TEST_CASE("entropy in bits") {
    CHECK(entropy(FrequencyDistribution({1.0})) == doctest::Approx(0.0));
    CHECK(entropy(FrequencyDistribution({1.0, 1.0})) == doctest::Approx(1.0));
    CHECK(entropy(FrequencyDistribution({1.0, 1.0, 1.0, 1.0})) == doctest::Approx(2.0));
    // Scale invariance.
    CHECK(entropy(FrequencyDistribution({3.0, 1.0})) ==
          doctest::Approx(entropy(FrequencyDistribution({6.0, 2.0}))).epsilon(1e-15));
}

TEST_CASE("non-maximum slot count and the general bound") {
    CHECK(non_maximum_slots(CostVector({0.0, 0.0, 1.0, 1.0})) == 2);
    CHECK(non_maximum_slots(CostVector({2.0, 2.0})) == 0);

    const BoundReport b = general_cost_bound(CostVector({0.0, 1.0}));
    CHECK(b.kind == BoundKind::GeneralHk);
    CHECK(b.value == doctest::Approx(2.0));
    CHECK(b.parameter == doctest::Approx(1.0));
    CHECK(general_cost_bound(CostVector({0.0, 0.0, 1.0})).value == doctest::Approx(2.5));
    // Constant costs: no non-maximum slot, bound collapses to 1.
    CHECK(general_cost_bound(CostVector({3.0, 3.0})).value == doctest::Approx(1.0));
}

TEST_CASE("concave and entropy bound reports") {
    CHECK(concave_cost_bound().value == 2.0);
    CHECK(ohc_guarantee(0.0) == doctest::Approx(2.0));
    CHECK(ohc_guarantee(1.0) == doctest::Approx(5.0));
    CHECK(ohc_guarantee(3.0) > ohc_guarantee(2.0));
    CHECK_THROWS_AS((void)ohc_guarantee(-0.5), Error);
    CHECK(log_cost_bound(2.5, 0.25).value == doctest::Approx(2.75));
    CHECK(bound_kind_name(BoundKind::GeneralHk) == std::string("general-hk"));
    CHECK(bound_kind_name(BoundKind::Concave2) == std::string("concave-2"));
    CHECK(bound_kind_name(BoundKind::LogEntropy) == std::string("log-entropy"));
    CHECK(bound_kind_name(BoundKind::OhcGuarantee) == std::string("ohc-guarantee"));
}

TEST_CASE("kraft sums") {
    CHECK(kraft_sum({}) == 0.0);
    CHECK(kraft_sum({1, 1}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kraft_sum({2, 2, 2, 2}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kraft_sum({1, 2, 3, 3}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("general lower bound family approaches one plus H_K") {
    const Instance inst = lower_bound_instance_general(2, 10, 1e-4);
    REQUIRE(inst.size() == 10);
    // Two free slots, two heavy items, light items share the tiny weight.
    CHECK(inst.c[0] == 0.0);
    CHECK(inst.c[1] == 0.0);
    CHECK(inst.c[2] == 1.0);
    CHECK(inst.f[0] == 1.0);
    CHECK(inst.f[1] == 1.0);
    CHECK(inst.f[2] == doctest::Approx(1e-4 / 8.0));
    CHECK(opt_cost(inst).cost == doctest::Approx(1e-4).epsilon(1e-9));

    const double ratio =
        competitive_ratio(inst, exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost);
    const double bound = general_cost_bound(inst.c).value;  // 1 + H_2 = 2.5
    CHECK(bound == doctest::Approx(2.5));
    CHECK(ratio <= bound + 1e-9);
    CHECK(ratio >= 0.99 * bound);

    CHECK_THROWS_AS((void)lower_bound_instance_general(0, 5, 0.1), Error);
    CHECK_THROWS_AS((void)lower_bound_instance_general(5, 5, 0.1), Error);
    CHECK_THROWS_AS((void)lower_bound_instance_general(1, 5, 0.0), Error);
}

TEST_CASE("concave family ratio has the exact closed form") {
    for (std::size_t n = 2; n <= 9; ++n) {
        for (double eps : {1.0, 0.1, 0.01}) {
            const Instance inst = lower_bound_instance_concave(n, eps);
            const double ratio = competitive_ratio(
                inst, exact_expected_cost(inst, SlotPolicy::fcfs()).expected_cost);
            CHECK(ratio == doctest::Approx(concave_family_exact_ratio(n, eps)).epsilon(1e-12));
            CHECK(ratio >= concave_family_ratio_lower_bound(n, eps) - 1e-12);
            CHECK(ratio <= 2.0 + 1e-12);
        }
    }
    // At n = 2 the closed form and the certified bound coincide.
    CHECK(concave_family_exact_ratio(2, 0.5) ==
          doctest::Approx(concave_family_ratio_lower_bound(2, 0.5)).epsilon(1e-15));
    CHECK_THROWS_AS((void)lower_bound_instance_concave(1, 0.5), Error);
    CHECK_THROWS_AS((void)lower_bound_instance_concave(3, 1.5), Error);
}

TEST_CASE("expected first-appearance position and its weight bound") {
    const FrequencyDistribution f({3.0, 2.0, 1.0});
    const RankBound rb = expected_rank_bound(f, 0);
    CHECK(rb.expected_position == doctest::Approx(1.0 + 2.0 / 5.0 + 1.0 / 4.0).epsilon(1e-15));
    CHECK(rb.bound == doctest::Approx(2.0));
    CHECK(rb.expected_position <= rb.bound);

    // Enumeration agrees with the pairwise formula.
    const OrderDistribution<double> dist = exact_order_distribution(f);
    for (std::size_t item = 0; item < 3; ++item) {
        double expect = 0.0;
        DrawSequence seq{0, 1, 2};
        do {
            const auto pos = std::find(seq.begin(), seq.end(), item) - seq.begin();
            expect += dist.of(seq) * static_cast<double>(pos + 1);
        } while (std::next_permutation(seq.begin(), seq.end()));
        const RankBound r = expected_rank_bound(f, item);
        CHECK(r.expected_position == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.expected_position <= r.bound + 1e-12);
    }

    CHECK(before_probability(f, 1, 0) == doctest::Approx(0.4));
    CHECK(before_probability(f, 0, 1) + before_probability(f, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("log of the position is bounded by log of the inverse weight") {
    RandomSource rng(53);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.next_below(4);
        const FrequencyDistribution f(testutil::random_weights(rng, n));
        const OrderDistribution<double> dist = exact_order_distribution(f);
        const double total = f.total();
        for (std::size_t item = 0; item < n; ++item) {
            double elog = 0.0;
            DrawSequence seq(n);
            std::iota(seq.begin(), seq.end(), 0u);
            do {
                const auto pos = std::find(seq.begin(), seq.end(),
                                           static_cast<std::uint32_t>(item)) -
                                 seq.begin();
                elog += dist.of(seq) * std::log2(static_cast<double>(pos + 1));
            } while (std::next_permutation(seq.begin(), seq.end()));
            CHECK(elog <= std::log2(total / f[item]) + 1e-12);
        }
    }
}
