#pragma once

#include <gmpxx.h>

#include <string>

namespace osa {

// Exact arithmetic scalar for the rational evaluation mode. Doubles convert
// losslessly (every finite double is a dyadic rational).
using Rational = mpq_class;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.get_d(); }

template <class T>
T scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) {
    return x;
}

template <>
inline Rational scalar_from_double<Rational>(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

}  // namespace osa
