#pragma once

#include "hgm/error.hpp"
#include "hgm/rational.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hgm {

/// A hypergeometric datum (alpha, beta) together with the specialization point z.
///
/// Both tuples are stored sorted so that multiset equality is plain equality.
/// Instances returned by normalize() satisfy every datum invariant and have
/// 0 not in alpha.
struct HypergeometricDatum {
    std::vector<Rational> alpha;
    std::vector<Rational> beta;
    Rational z;

    std::size_t degree() const { return alpha.size(); }

    friend bool operator==(const HypergeometricDatum&, const HypergeometricDatum&) = default;
};

/// Combinatorial invariants derived from a normalized datum.
struct MotiveSpec {
    int r = 0;        // degree
    int w = 0;        // minimal motivic weight
    int D = 0;        // twist exponent (w + 1 - xi_beta) / 2
    int xi_beta = 0;  // number of zero entries of beta
    std::vector<Rational> breaks;  // 0 = gamma_0 < ... < gamma_s = 1
    std::int64_t b = 1;            // lcm of the denominators of alpha and beta

    std::size_t interval_count() const { return breaks.size() - 1; }
};

enum class PrimeKind { good, wild, tame, excluded_small };

std::string_view to_string(PrimeKind kind);

/// Classification of one prime. `kind` reports the most severe reason with
/// precedence wild > tame > excluded_small > good; the flags keep the detail
/// when a prime is bad for more than one reason.
struct PrimeClass {
    std::uint64_t p = 0;
    PrimeKind kind = PrimeKind::good;
    bool wild = false;
    bool tame = false;

    friend bool operator==(const PrimeClass&, const PrimeClass&) = default;
};

/// True iff every reduced fraction of a given denominator occurs in each
/// tuple with the same multiplicity as its conjugates.
bool is_balanced(std::span<const Rational> alpha, std::span<const Rational> beta);

/// Validates the datum and, when 0 is in alpha, applies the isomorphism
/// (alpha, beta, z) -> (beta, alpha, 1/z). Throws DatumError.
HypergeometricDatum normalize(std::vector<Rational> alpha, std::vector<Rational> beta, Rational z);

/// Expands cyclotomic indices A, B into the primitive fractions k/a, gcd(k, a) = 1.
/// Throws DatumError on a degree mismatch or overlapping output.
std::pair<std::vector<Rational>, std::vector<Rational>> from_cyclotomic(std::span<const std::int64_t> A,
                                                                        std::span<const std::int64_t> B);

/// #{j : alpha_j <= x} - #{j : beta_j <= x}.
int zigzag(const HypergeometricDatum& datum, const Rational& x);

/// Throws DatumError when the twist D is not an integer.
MotiveSpec motive_spec(const HypergeometricDatum& datum);

PrimeClass classify_prime(const HypergeometricDatum& datum, std::uint64_t p);

/// Every prime p <= X with its class, ordered by p.
std::vector<PrimeClass> classify_primes(const HypergeometricDatum& datum, std::uint64_t X);

inline bool is_good(const HypergeometricDatum& datum, std::uint64_t p) {
    return classify_prime(datum, p).kind == PrimeKind::good;
}

}  // namespace hgm
