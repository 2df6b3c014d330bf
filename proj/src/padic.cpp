#include "hgm/padic.hpp"

#include "hgm/error.hpp"
#include "hgm/modular.hpp"

#include <string>

namespace hgm {

GammaTable gamma_table(std::uint64_t p) {
    if (p == 2 || !is_prime(p)) throw PrimeError("gamma table needs an odd prime, got " + std::to_string(p));
    GammaTable table;
    table.p = p;
    table.values.resize(p);
    table.values[0] = 1;
    for (std::uint64_t n = 0; n + 1 < p; ++n) table.values[n + 1] = mul_mod(omega(n, p), table.values[n], p);
    return table;
}

std::uint64_t gamma_at_rational(const GammaTable& table, const Rational& x) {
    // Rational::mod throws std::domain_error when p divides the denominator.
    return table.values[x.mod(table.p)];
}

}  // namespace hgm
