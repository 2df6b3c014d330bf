#include "hgm/oracle.hpp"

#include "hgm/modular.hpp"
#include "hgm/padic.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace hgm {

namespace {

// Positive remainder of n modulo d.
std::int64_t pos_mod(std::int64_t n, std::int64_t d) {
    std::int64_t r = n % d;
    return r < 0 ? r + d : r;
}

// x_j scaled to the common denominator N = b (p - 1).
struct Scaled {
    std::int64_t N = 1;
    std::vector<std::int64_t> alpha, beta;
};

Scaled scale(const HypergeometricDatum& datum, std::int64_t b, std::uint64_t p) {
    Scaled s;
    s.N = b * static_cast<std::int64_t>(p - 1);
    for (const auto& a : datum.alpha) s.alpha.push_back(a.num() * (s.N / a.den()));
    for (const auto& x : datum.beta) s.beta.push_back(x.num() * (s.N / x.den()));
    return s;
}

std::int64_t tuple_lcm(const HypergeometricDatum& datum) {
    std::int64_t b = 1;
    for (const auto& a : datum.alpha) b = std::lcm(b, a.den());
    for (const auto& x : datum.beta) b = std::lcm(b, x.den());
    return b;
}

// Numerator over N of sum_j ({x_j - m/(p-1)} - x_j).
std::int64_t eta_numerator(std::span<const std::int64_t> xs, std::int64_t shift, std::int64_t N) {
    std::int64_t total = 0;
    for (auto x : xs) total += pos_mod(x - shift, N) - x;
    return total;
}

int eta_from_scaled(const Scaled& s, std::uint64_t m, std::uint64_t p) {
    std::int64_t shift = static_cast<std::int64_t>(m) * (s.N / static_cast<std::int64_t>(p - 1));
    std::int64_t num = eta_numerator(s.alpha, shift, s.N) - eta_numerator(s.beta, shift, s.N);
    if (num % s.N != 0) throw InvariantError("eta difference is not an integer");
    return static_cast<int>(num / s.N);
}

}  // namespace

int eta_diff(const HypergeometricDatum& datum, std::uint64_t m, std::uint64_t p) {
    return eta_from_scaled(scale(datum, tuple_lcm(datum), p), m, p);
}

int xi_m(std::span<const Rational> beta, std::uint64_t m, std::uint64_t p) {
    Rational t(static_cast<std::int64_t>(m), static_cast<std::int64_t>(p - 1));
    int xi = 0;
    for (const auto& b : beta) xi += (b == Rational(0)) - (b == t);
    return xi;
}

TermExponents term_exponents(const HypergeometricDatum& datum, std::uint64_t m, std::uint64_t p) {
    return {m, eta_diff(datum, m, p), xi_m(datum.beta, m, p)};
}

std::uint64_t trace_mod_p_oracle(const HypergeometricDatum& datum, std::uint64_t p) {
    auto pc = classify_prime(datum, p);
    if (pc.kind != PrimeKind::good)
        throw PrimeError("prime " + std::to_string(p) + " is " + std::string(to_string(pc.kind)));
    const MotiveSpec spec = motive_spec(datum);
    const GammaTable gamma = gamma_table(p);
    const Scaled s = scale(datum, spec.b, p);
    const std::uint64_t inv_N = inv_mod(static_cast<std::uint64_t>(s.N) % p, p);
    const std::uint64_t z = datum.z.mod(p);

    // Gamma_p(x_j) for the constant denominators of (x_j)_m^*.
    std::uint64_t base_num = 1, base_den = 1;
    for (const auto& a : datum.alpha) base_den = mul_mod(base_den, gamma_at_rational(gamma, a), p);
    for (const auto& b : datum.beta) base_num = mul_mod(base_num, gamma_at_rational(gamma, b), p);

    // Running sum kept as a fraction sum_num / sum_den so that only one
    // inversion is needed per prime.
    std::uint64_t sum_num = 0, sum_den = 1;
    std::uint64_t zpow = 1;
    for (std::uint64_t m = 0; m + 1 < p; ++m, zpow = mul_mod(zpow, z, p)) {
        const int eta = eta_from_scaled(s, m, p);
        const int xi = xi_m(datum.beta, m, p);
        const int exponent = eta + spec.D + xi;
        if (exponent < 0)
            throw InvariantError("negative p-adic valuation " + std::to_string(exponent) + " at m = " +
                                 std::to_string(m) + ", p = " + std::to_string(p));
        if (exponent > 0) continue;

        std::int64_t shift = static_cast<std::int64_t>(m) * spec.b;
        std::uint64_t num = base_num, den = base_den;
        for (auto a : s.alpha) {
            auto fr = static_cast<std::uint64_t>(pos_mod(a - shift, s.N));
            num = mul_mod(num, gamma[mul_mod(fr % p, inv_N, p)], p);
        }
        for (auto b : s.beta) {
            auto fr = static_cast<std::uint64_t>(pos_mod(b - shift, s.N));
            den = mul_mod(den, gamma[mul_mod(fr % p, inv_N, p)], p);
        }
        num = mul_mod(num, zpow, p);
        if (eta % 2 != 0) num = (p - num) % p;
        sum_num = add_mod(mul_mod(sum_num, den, p), mul_mod(num, sum_den, p), p);
        sum_den = mul_mod(sum_den, den, p);
    }
    return mul_mod(sum_num, inv_mod(sum_den, p), p);
}

}  // namespace hgm
