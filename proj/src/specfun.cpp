#include "mimix/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mimix/core.hpp"

namespace mimix {

namespace {

// psi(x) ~ log x - 1/(2x) - sum B_2j / (2j x^2j), valid once x >= 10.
double digamma_asymptotic(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_2j/(2j) for j = 1..7.
    const double series =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
    return std::log(x) - 0.5 * inv - series;
}

constexpr std::size_t memo_size = 65;

std::array<double, memo_size> build_memo() {
    // psi(n) = -gamma + H_{n-1}
    std::array<double, memo_size> memo{};
    memo[0] = 0.0;  // unused
    double harmonic = 0.0;
    for (std::size_t n = 1; n < memo_size; ++n) {
        memo[n] = -euler_gamma + harmonic;
        harmonic += 1.0 / static_cast<double>(n);
    }
    return memo;
}

const std::array<double, memo_size> digamma_memo = build_memo();

}  // namespace

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ParameterError("digamma requires a finite x > 0, got " + std::to_string(x));
    }
    double shift = 0.0;
    while (x < 10.0) {
        shift += 1.0 / x;
        x += 1.0;
    }
    return digamma_asymptotic(x) - shift;
}

double digamma(std::size_t n) {
    if (n == 0) throw ParameterError("digamma requires n >= 1");
    if (n < memo_size) return digamma_memo[n];
    return digamma_asymptotic(static_cast<double>(n));
}

}  // namespace mimix
