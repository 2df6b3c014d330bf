#pragma once

#include "hgm/core.hpp"
#include "hgm/modular.hpp"
#include "hgm/remtree.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace hgm {

/// Shift (delta, epsilon) for a break gamma = a/b and a residue class of p mod b:
/// floor(gamma (p - 1)) + epsilon == delta (mod p) for every such prime p.
struct Shift {
    Rational delta;   // in [0, 1] with denominator dividing b
    int epsilon = 1;  // 1 or 2

    friend bool operator==(const Shift&, const Shift&) = default;
};

/// Throws DatumError when gcd(c, denominator(gamma)) != 1.
Shift rational_shift(const Rational& gamma, std::int64_t c);

/// Dense polynomial with integer coefficients, lowest degree first.
struct IntegerPolynomial {
    std::vector<mpz_class> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    mpz_class operator()(const mpz_class& k) const;

    friend bool operator==(const IntegerPolynomial&, const IntegerPolynomial&) = default;
};

/// 1 if x <= y, else 0.
inline int iota(const Rational& x, const Rational& y) { return x <= y ? 1 : 0; }

/// Everything needed to run one remainder tree: interval (gamma_i, gamma_{i+1})
/// and the primes congruent to c modulo the denominator of gamma_i.
struct IntervalPlan {
    std::size_t i = 0;
    std::int64_t modulus = 1;  // denominator of gamma_i
    std::int64_t c = 0;        // residue class in [0, modulus)
    Shift shift;
    IntegerPolynomial f;  // d * z * prod_j (alpha_j + delta + iota(alpha_j, gamma_i) + k - epsilon)
    IntegerPolynomial g;  // d * prod_j (beta_j + delta + iota(beta_j, gamma_i) + k - epsilon)
    mpz_class d;          // lcm of the coefficient denominators before scaling
    int sigma = 0;        // sign of the p-power factor inside the interval, or 0
};

/// Sign with which the summands strictly inside interval i enter the trace mod p.
int sigma_value(const MotiveSpec& spec, const HypergeometricDatum& datum, std::size_t i);

IntervalPlan interval_polynomials(const HypergeometricDatum& datum, const MotiveSpec& spec, std::size_t i,
                                  std::int64_t c);
IntervalPlan interval_polynomials(const HypergeometricDatum& datum, std::size_t i, std::int64_t c);

/// [[g(k), 0], [sigma g(k), f(k)]].
Mat2 a_matrix(const IntervalPlan& plan, std::int64_t k);

/// floor(gamma (p - 1)).
std::int64_t break_index(const Rational& gamma, std::uint64_t p);

/// Number of remainder-tree factors in S_i(p): m_{i+1} - m_i - 1, clamped at 0.
std::size_t interval_cut(const MotiveSpec& spec, std::size_t i, std::uint64_t p);

/// S_i(p) = A(1) ... A(m_{i+1} - m_i - 1) mod p for all given primes at once.
/// Every prime must be congruent to c modulo the denominator of gamma_i.
std::map<std::uint64_t, ModMat2> interval_products(const HypergeometricDatum& datum, std::size_t i,
                                                   std::int64_t c, std::span<const std::uint64_t> primes,
                                                   std::uint64_t forest_bits = std::uint64_t{1} << 26);

/// Coefficient of the m_i summand of the trace formula mod p (the i = 0
/// summand is p^D).
int tau_value(const MotiveSpec& spec, const HypergeometricDatum& datum, std::size_t i, std::uint64_t p);

struct BreakMatrix {
    std::size_t i = 0;
    std::uint64_t p = 0;
    ModMat2 matrix;
};

/// T_i(p) = [[1, 0], [tau_i, z prod_j h_i(alpha_j, p) / h_i(beta_j, p)]] mod p.
/// Throws InvariantError if a step factor vanishes mod p.
BreakMatrix fix_break(const HypergeometricDatum& datum, const MotiveSpec& spec, std::size_t i, std::uint64_t p);
BreakMatrix fix_break(const HypergeometricDatum& datum, std::size_t i, std::uint64_t p);

struct AssembledTrace {
    std::uint64_t p = 0;
    ModMat2 S;
    std::uint64_t h = 0;  // S_21 / S_11 mod p
};

/// S(p) = T_0 S_0 T_1 S_1 ... T_{s-1} S_{s-1} mod p and h = S_21 / S_11.
/// Throws InvariantError when S_11 vanishes mod p.
AssembledTrace assemble(std::uint64_t p, std::span<const ModMat2> interval_mats,
                        std::span<const ModMat2> break_mats);

/// True when p is large enough that the break indices m_0 < m_1 < ... < m_s
/// are strictly increasing; other good primes go to the oracle.
bool amortizable(const MotiveSpec& spec, std::uint64_t p);

enum class TraceSource { amortized, oracle_fallback, oracle };

struct TraceResult {
    std::uint64_t p = 0;
    std::uint64_t h = 0;
    TraceSource source = TraceSource::amortized;

    friend bool operator==(const TraceResult&, const TraceResult&) = default;
};

struct TraceOptions {
    unsigned threads = 1;  // 0 picks the hardware concurrency
    std::uint64_t forest_bits = std::uint64_t{1} << 26;
    /// Fault-injection hook for tests: maps (interval, sigma) to the sigma used.
    std::function<int(std::size_t, int)> sigma_hook;
};

/// H_p mod p for every good odd prime p <= X, ascending in p. `datum` must be
/// normalized.
std::vector<TraceResult> traces(const HypergeometricDatum& datum, std::uint64_t X, const TraceOptions& options = {});

}  // namespace hgm
