#pragma once

#include "hgm/modular.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hgm {

/// 2x2 matrix with arbitrary-precision integer entries.
///
/// Lower-triangular operands (upper-right entry 0) take a 4-multiplication
/// product path, and their products stay lower-triangular.
struct Mat2 {
    std::array<mpz_class, 4> e;  // row-major: m11, m12, m21, m22

    Mat2() = default;
    Mat2(mpz_class m11, mpz_class m12, mpz_class m21, mpz_class m22);

    static Mat2 identity() { return Mat2(1, 0, 0, 1); }
    static Mat2 zero() { return Mat2(0, 0, 0, 0); }
    /// [[a, 0], [c, d]].
    static Mat2 lower_triangular(mpz_class a, mpz_class c, mpz_class d);

    mpz_class& at(int row, int col) { return e[2 * row + col]; }
    const mpz_class& at(int row, int col) const { return e[2 * row + col]; }

    bool is_lower_triangular() const { return mpz_sgn(e[1].get_mpz_t()) == 0; }

    /// Largest entry size in bits.
    std::size_t bits() const;

    friend bool operator==(const Mat2& a, const Mat2& b) { return a.e == b.e; }
};

/// out = a * b. `out` must not alias `a` or `b`.
void mul_into(Mat2& out, const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);

/// Reduces every entry into [0, m).
void reduce(Mat2& a, const mpz_class& m);
Mat2 reduced(Mat2 a, const mpz_class& m);

ModMat2 to_mod(const Mat2& a, std::uint64_t p);

std::ostream& operator<<(std::ostream& os, const Mat2& m);

/// Accumulating remainder tree.
///
/// Given A_0..A_{b-1} and pairwise coprime positive moduli p_0..p_{b-1},
/// returns C with C[n] = A_0 ... A_{n-1} mod p_n for 1 <= n < b and
/// C[0] = identity. A_{b-1} never enters a requested product. Throws
/// std::invalid_argument on a length mismatch or a non-positive modulus.
std::vector<Mat2> rem_tree(std::span<const Mat2> matrices, std::span<const mpz_class> moduli);

/// Spacing variant: C[n] = A_0 ... A_{cuts[n]-1} mod primes[n], cuts[n] in
/// [0, #matrices]. Repeated cut points share one slot whose modulus is the
/// product of the primes; each result is split off by reduction.
std::vector<Mat2> rem_tree_with_spacing(std::span<const Mat2> matrices, std::span<const std::uint64_t> primes,
                                        std::span<const std::size_t> cuts);

/// Same contract as rem_tree_with_spacing, computed by a forest of
/// `forest_width` trees over consecutive index chunks. The prefix product of
/// the earlier chunks is carried modulo the product of all later moduli.
std::vector<Mat2> rem_forest(std::vector<Mat2> matrices, std::span<const std::uint64_t> primes,
                             std::span<const std::size_t> cuts, std::size_t forest_width);

/// Smallest width for which every chunk's share of the modulus product stays
/// under `bit_budget` bits, assuming the primes spread evenly.
std::size_t forest_width_for_budget(std::span<const std::uint64_t> primes, std::uint64_t bit_budget);

/// Forest width at which each chunk's matrix entries are about as large as
/// the product of all moduli.
std::size_t balanced_forest_width(std::span<const Mat2> matrices, std::span<const std::uint64_t> primes);

}  // namespace hgm
