#include <doctest.h>

#include "hgm/modular.hpp"
#include "hgm/oracle.hpp"

#include <cstdint>

using namespace hgm;

namespace {

std::vector<Rational> Q(std::initializer_list<const char*> xs) {
    std::vector<Rational> out;
    for (auto x : xs) out.push_back(Rational::parse(x));
    return out;
}

HypergeometricDatum example() {
    return normalize(Q({"1/4", "1/2", "1/2", "3/4"}), Q({"1/3", "1/3", "2/3", "2/3"}), Rational(1, 5));
}

// p + 1 - #E(F_p) for y^2 = -x(x-1)(x-z).
std::int64_t elliptic_trace(const Rational& z, std::uint64_t p) {
    const std::uint64_t zp = z.mod(p);
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t f = mul_mod(mul_mod(x, sub_mod(x, 1, p), p), sub_mod(x, zp, p), p);
        f = sub_mod(0, f, p);
        if (f == 0) continue;
        sum += pow_mod(f, (p - 1) / 2, p) == 1 ? 1 : -1;
    }
    return -sum;
}

}  // namespace

TEST_CASE("eta_diff") {
    const auto d = example();
    CHECK(eta_diff(d, 0, 67) == 0);
    CHECK(eta_diff(d, 25, 67) == -1);
    CHECK(eta_diff(d, 45, 67) == -1);
}

TEST_CASE("xi_m") {
    const auto d = example();
    CHECK(xi_m(d.beta, 0, 67) == 0);
    CHECK(xi_m(d.beta, 22, 67) == -2);
    CHECK(xi_m(d.beta, 33, 67) == 0);
    const auto beta = Q({"0", "0"});
    CHECK(xi_m(beta, 0, 11) == 0);
    CHECK(xi_m(beta, 3, 11) == 2);
}

TEST_CASE("term_exponents at m = 0") {
    const auto d = example();
    for (std::uint64_t p : {7, 11, 67}) {
        const auto t = term_exponents(d, 0, p);
        CHECK(t.eta_diff == 0);
        CHECK(t.xi_m == 0);
    }
}

TEST_CASE("worked example trace") { CHECK(trace_mod_p_oracle(example(), 67) == 59); }

TEST_CASE("oracle rejects bad primes") {
    const auto d = example();
    CHECK_THROWS_AS(trace_mod_p_oracle(d, 2), PrimeError);
    CHECK_THROWS_AS(trace_mod_p_oracle(d, 3), PrimeError);
    CHECK_THROWS_AS(trace_mod_p_oracle(d, 5), PrimeError);
    CHECK_THROWS_AS(trace_mod_p_oracle(d, 9), PrimeError);
}

TEST_CASE("elliptic point counts") {
    for (const Rational z : {Rational(2), Rational(3), Rational(1, 2)}) {
        const auto d = normalize(Q({"1/2", "1/2"}), Q({"0", "0"}), z);
        for (auto p : primes_up_to(500)) {
            if (!is_good(d, p)) continue;
            CAPTURE(p);
            CHECK(trace_mod_p_oracle(d, p) == reduce_signed(elliptic_trace(z, p), p));
        }
    }
    const auto d = normalize(Q({"1/2", "1/2"}), Q({"0", "0"}), 2);
    CHECK(trace_mod_p_oracle(d, 11) == reduce_signed(elliptic_trace(2, 11), 11));
}

TEST_CASE("oracle is invariant under the swap isomorphism") {
    const std::vector<HypergeometricDatum> data{
        example(),
        normalize(Q({"1/2", "1/2"}), Q({"0", "0"}), 3),
        normalize(Q({"1/5", "2/5", "3/5", "4/5"}), Q({"0", "0", "1/3", "2/3"}), Rational(-2, 7)),
        normalize(Q({"1/6", "5/6"}), Q({"1/4", "3/4"}), Rational(9, 2)),
    };
    for (const auto& d : data) {
        const auto swapped = normalize(d.beta, d.alpha, Rational(1) / d.z);
        for (auto p : primes_up_to(300)) {
            if (!is_good(d, p) || !is_good(swapped, p)) continue;
            CAPTURE(p);
            CHECK(trace_mod_p_oracle(swapped, p) == trace_mod_p_oracle(d, p));
        }
    }
}

TEST_CASE("output lies in [0, p)") {
    const auto d = example();
    for (auto p : primes_up_to(400))
        if (is_good(d, p)) CHECK(trace_mod_p_oracle(d, p) < p);
}
