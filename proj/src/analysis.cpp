#include "osa/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace osa {

double harmonic(std::uint64_t k) {
    double sum = 0.0;
    for (std::uint64_t i = k; i >= 1; --i) sum += 1.0 / static_cast<double>(i);
    return sum;
}

double entropy(const FrequencyDistribution& f) {
    double h = 0.0;
    for (double q : f.normalized()) h -= q * std::log2(q);
    return h;
}

std::size_t non_maximum_slots(const CostVector& c) {
    const double top = c[c.size() - 1];
    std::size_t count = 0;
    for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j] < top) ++count;
    return count;
}

BoundReport general_cost_bound(const CostVector& c) {
    const std::size_t k = non_maximum_slots(c);
    return BoundReport{BoundKind::GeneralHk, 1.0 + harmonic(k), static_cast<double>(k)};
}

BoundReport concave_cost_bound() { return BoundReport{BoundKind::Concave2, 2.0, 0.0}; }

double ohc_guarantee(double entropy_bits) {
    if (entropy_bits < 0.0) fail(Errc::BadParameters, "entropy cannot be negative");
    return entropy_bits + 2.0 * std::log2(1.0 + entropy_bits) + 2.0;
}

BoundReport ohc_guarantee_bound(double entropy_bits) {
    return BoundReport{BoundKind::OhcGuarantee, ohc_guarantee(entropy_bits), entropy_bits};
}

BoundReport log_cost_bound(double entropy_bits, double slack) {
    if (entropy_bits < 0.0) fail(Errc::BadParameters, "entropy cannot be negative");
    if (slack < 0.0) fail(Errc::BadParameters, "slack cannot be negative");
    return BoundReport{BoundKind::LogEntropy, entropy_bits + slack, entropy_bits};
}

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::GeneralHk: return "general-hk";
        case BoundKind::Concave2: return "concave-2";
        case BoundKind::LogEntropy: return "log-entropy";
        case BoundKind::OhcGuarantee: return "ohc-guarantee";
    }
    return "unknown";
}

double kraft_sum(const std::vector<std::uint32_t>& lengths) {
    std::vector<std::uint32_t> sorted(lengths);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double sum = 0.0;
    double carry = 0.0;
    for (std::uint32_t len : sorted) {
        const double term = std::ldexp(1.0, -static_cast<int>(len));
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

Instance lower_bound_instance_general(std::size_t K, std::size_t n, double eps) {
    if (K < 1 || K >= n) fail(Errc::BadParameters, "need 1 <= K < n");
    if (!(eps > 0.0) || !(eps < 1.0)) fail(Errc::BadParameters, "need eps in (0, 1)");
    const std::size_t light = n - K;
    std::vector<double> f(n);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < K; ++i) {
        f[i] = 1.0;
        c[i] = 0.0;
    }
    for (std::size_t i = K; i < n; ++i) {
        f[i] = eps / static_cast<double>(light);
        c[i] = 1.0;
    }
    return validate_instance(std::move(f), std::move(c));
}

Instance lower_bound_instance_concave(std::size_t n, double eps) {
    if (n < 2) fail(Errc::BadParameters, "need n >= 2");
    if (!(eps > 0.0) || !(eps <= 1.0)) fail(Errc::BadParameters, "need eps in (0, 1]");
    std::vector<double> f(n, eps);
    f[0] = 1.0;
    std::vector<double> c(n, 1.0);
    c[0] = 0.0;
    return validate_instance(std::move(f), std::move(c));
}

double concave_family_exact_ratio(std::size_t n, double eps) {
    if (n < 2) fail(Errc::BadParameters, "need n >= 2");
    const double m = static_cast<double>(n - 1);
    return (2.0 + (m - 1.0) * eps) / (1.0 + m * eps);
}

double concave_family_ratio_lower_bound(std::size_t n, double eps) {
    if (n < 2) fail(Errc::BadParameters, "need n >= 2");
    return 2.0 / (1.0 + static_cast<double>(n - 1) * eps);
}

double before_probability(const FrequencyDistribution& f, std::size_t h, std::size_t i) {
    if (h >= f.size() || i >= f.size() || h == i)
        fail(Errc::BadParameters, "need two distinct items");
    return f[h] / (f[i] + f[h]);
}

RankBound expected_rank_bound(const FrequencyDistribution& f, std::size_t item) {
    if (item >= f.size()) fail(Errc::BadParameters, "item out of range");
    double expected = 1.0;
    for (std::size_t h = 0; h < f.size(); ++h)
        if (h != item) expected += f[h] / (f[item] + f[h]);
    return RankBound{expected, f.total() / f[item]};
}

}  // namespace osa
