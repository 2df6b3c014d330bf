#pragma once

#include "hgm/error.hpp"
#include "hgm/rational.hpp"

#include <cstdint>
#include <vector>

namespace hgm {

/// The factor of the Morita gamma functional equation Gamma_p(x + 1) = omega(x) Gamma_p(x),
/// evaluated on a residue: -x mod p for a unit, -1 otherwise.
inline std::uint64_t omega(std::uint64_t x, std::uint64_t p) {
    x %= p;
    return x == 0 ? p - 1 : p - x;
}

/// Gamma_p(n) mod p for n = 0..p-1.
struct GammaTable {
    std::uint64_t p = 0;
    std::vector<std::uint64_t> values;

    std::uint64_t operator[](std::uint64_t n) const { return values[n]; }
};

/// O(p) construction through the functional equation. Throws PrimeError
/// unless p is an odd prime.
GammaTable gamma_table(std::uint64_t p);

/// Gamma_p(x) mod p for a rational x whose denominator is prime to p.
/// Gamma_p is 1-Lipschitz, so only the residue of x matters.
std::uint64_t gamma_at_rational(const GammaTable& table, const Rational& x);

}  // namespace hgm
