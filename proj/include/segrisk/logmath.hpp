#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace segrisk {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln sum exp(v_i); returns -inf when every term is -inf. A single finite
// term is returned unchanged.
inline double log_sum_exp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v) m = x > m ? x : m;
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - m);
    return m + std::log(acc);
}

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace segrisk
