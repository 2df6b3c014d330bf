#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hgm {

// Word-size modular arithmetic. Moduli are assumed to be below 2^63.

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

/// Canonical residue in [0, p) of a signed integer.
inline std::uint64_t reduce_signed(std::int64_t a, std::uint64_t p) {
    if (a >= 0) return static_cast<std::uint64_t>(a) % p;
    std::uint64_t r = static_cast<std::uint64_t>(-(a + 1)) % p;  // -(a+1) avoids INT64_MIN overflow
    return p - 1 - r;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);

/// Inverse of a modulo p. Throws std::domain_error when gcd(a, p) != 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

bool is_prime(std::uint64_t n);

/// All primes <= limit, ascending (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// 2x2 matrix over Z/pZ, row-major entries in [0, p).
struct ModMat2 {
    std::array<std::uint64_t, 4> e{1, 0, 0, 1};

    std::uint64_t& at(int row, int col) { return e[2 * row + col]; }
    std::uint64_t at(int row, int col) const { return e[2 * row + col]; }

    static ModMat2 identity() { return {}; }
    bool is_lower_triangular() const { return e[1] == 0; }

    friend bool operator==(const ModMat2&, const ModMat2&) = default;
};

ModMat2 mul(const ModMat2& a, const ModMat2& b, std::uint64_t p);

std::ostream& operator<<(std::ostream& os, const ModMat2& m);

}  // namespace hgm
