#pragma once

#include <cstddef>
#include <vector>

#include "osa/core.hpp"

namespace osa {

struct FrequencySpec {
    enum class Kind { Uniform, Zipf, Geometric };
    Kind kind = Kind::Uniform;
    std::size_t n = 0;
    double param = 1.0;  // Zipf exponent s, geometric ratio r
};

// Uniform: all weights 1. Zipf: weight 1/i^s for 1-based i. Geometric:
// weight r^i. Invalid or underflowing parameters raise BadSpec.
FrequencyDistribution gen_frequencies(const FrequencySpec& spec);

struct CostSpec {
    enum class Kind { ZeroOne, Linear, Log, Constant, Codeword };
    Kind kind = Kind::Linear;
    std::size_t n = 0;
    std::size_t zeros = 0;  // ZeroOne: number of free slots
    double value = 1.0;     // Constant level
};

// ZeroOne: `zeros` zero costs then ones. Linear: 0, 1, 2, ... Log:
// log2(slot + 1) for 1-based slots. Constant: all equal. Codeword: the
// universal codeword lengths.
CostVector gen_costs(const CostSpec& spec);

Instance make_instance(const FrequencySpec& fs, const CostSpec& cs);

}  // namespace osa
