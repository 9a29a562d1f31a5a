#pragma once

#include <cstddef>

namespace mimix {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Digamma (logarithmic derivative of Gamma) for x > 0. Throws ParameterError otherwise.
double digamma(double x);

/// Digamma at a positive integer; memoized for small arguments.
double digamma(std::size_t n);

}  // namespace mimix
