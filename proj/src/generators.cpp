#include "osa/generators.hpp"

#include <cmath>

#include "osa/ucode.hpp"

namespace osa {

FrequencyDistribution gen_frequencies(const FrequencySpec& spec) {
    if (spec.n == 0) fail(Errc::BadSpec, "need at least one item");
    std::vector<double> f(spec.n);
    switch (spec.kind) {
        case FrequencySpec::Kind::Uniform:
            for (double& w : f) w = 1.0;
            break;
        case FrequencySpec::Kind::Zipf:
            if (!std::isfinite(spec.param)) fail(Errc::BadSpec, "zipf exponent must be finite");
            for (std::size_t i = 0; i < spec.n; ++i)
                f[i] = std::pow(static_cast<double>(i + 1), -spec.param);
            break;
        case FrequencySpec::Kind::Geometric:
            if (!(spec.param > 0.0) || !std::isfinite(spec.param))
                fail(Errc::BadSpec, "geometric ratio must be positive");
            for (std::size_t i = 0; i < spec.n; ++i)
                f[i] = std::pow(spec.param, static_cast<double>(i + 1));
            if (f.back() == 0.0 || f.front() == 0.0 || std::isinf(f.front()) || std::isinf(f.back()))
                fail(Errc::BadSpec, "geometric weights leave the double range");
            break;
    }
    return FrequencyDistribution(std::move(f));
}

CostVector gen_costs(const CostSpec& spec) {
    if (spec.n == 0) fail(Errc::BadSpec, "need at least one slot");
    std::vector<double> c(spec.n);
    switch (spec.kind) {
        case CostSpec::Kind::ZeroOne:
            if (spec.zeros > spec.n) fail(Errc::BadSpec, "more zero slots than slots");
            for (std::size_t j = 0; j < spec.n; ++j) c[j] = j < spec.zeros ? 0.0 : 1.0;
            break;
        case CostSpec::Kind::Linear:
            for (std::size_t j = 0; j < spec.n; ++j) c[j] = static_cast<double>(j);
            break;
        case CostSpec::Kind::Log:
            for (std::size_t j = 0; j < spec.n; ++j)
                c[j] = std::log2(static_cast<double>(j + 1));
            break;
        case CostSpec::Kind::Constant:
            if (!(spec.value >= 0.0) || !std::isfinite(spec.value))
                fail(Errc::BadSpec, "constant cost must be non-negative");
            for (double& x : c) x = spec.value;
            break;
        case CostSpec::Kind::Codeword:
            for (std::size_t j = 0; j < spec.n; ++j)
                c[j] = static_cast<double>(ucode_length(j + 1));
            break;
    }
    return CostVector(std::move(c));
}

Instance make_instance(const FrequencySpec& fs, const CostSpec& cs) {
    if (fs.n != cs.n) fail(Errc::BadSpec, "frequency and cost sizes differ");
    return Instance{gen_frequencies(fs), gen_costs(cs)};
}

}  // namespace osa
