#pragma once

#include "hgm/core.hpp"

#include <cstdint>
#include <span>

namespace hgm {

/// p-power and sign data of the m-th summand of the mod-p trace formula.
struct TermExponents {
    std::uint64_t m = 0;
    int eta_diff = 0;  // eta_m(alpha) - eta_m(beta)
    int xi_m = 0;      // xi_m(beta)
};

/// eta_m(alpha) - eta_m(beta) at q = p: the sum over alpha of
/// {alpha_j - m/(p-1)} - alpha_j minus the same sum over beta. Evaluated
/// exactly over the common denominator lcm(b) * (p - 1).
int eta_diff(const HypergeometricDatum& datum, std::uint64_t m, std::uint64_t p);

/// #{j : beta_j = 0} - #{j : beta_j = m/(p-1)}.
int xi_m(std::span<const Rational> beta, std::uint64_t m, std::uint64_t p);

TermExponents term_exponents(const HypergeometricDatum& datum, std::uint64_t m, std::uint64_t p);

/// H_p(alpha, beta | z) mod p evaluated term by term from a Gamma_p table.
///
/// O(r p) per prime. Shares no code with the amortized path beyond the
/// datum model, so it serves as ground truth. Throws PrimeError unless p is
/// an odd good prime.
std::uint64_t trace_mod_p_oracle(const HypergeometricDatum& datum, std::uint64_t p);

}  // namespace hgm
