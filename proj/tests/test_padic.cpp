#include <doctest.h>

#include "hgm/modular.hpp"
#include "hgm/padic.hpp"

using namespace hgm;

TEST_CASE("omega") {
    CHECK(omega(0, 7) == 6);
    CHECK(omega(3, 7) == 4);
    CHECK(omega(1, 5) == 4);
}

TEST_CASE("gamma_table examples") {
    const auto t7 = gamma_table(7);
    REQUIRE(t7.values.size() == 7);
    CHECK(t7[0] == 1);
    CHECK(t7[1] == 6);
    CHECK(t7[4] == 6);
    const auto t5 = gamma_table(5);
    CHECK(t5[4] == 1);
    CHECK_THROWS_AS(gamma_table(2), PrimeError);
    CHECK_THROWS_AS(gamma_table(9), PrimeError);
}

TEST_CASE("gamma_at_rational") {
    const auto t7 = gamma_table(7);
    CHECK(gamma_at_rational(t7, 0) == 1);
    CHECK(gamma_at_rational(t7, Rational(1, 2)) == t7[4]);
    CHECK(gamma_at_rational(t7, Rational(1, 2)) == 6);
    const auto t5 = gamma_table(5);
    CHECK(gamma_at_rational(t5, 3) == t5[3]);
    CHECK_THROWS(gamma_at_rational(t7, Rational(1, 7)));
}

TEST_CASE("functional equation and units for p <= 200") {
    for (auto p : primes_up_to(200)) {
        if (p == 2) continue;
        const auto t = gamma_table(p);
        CHECK(t[1] == p - 1);
        for (std::uint64_t n = 0; n + 1 < p; ++n) CHECK(t[n + 1] == mul_mod(omega(n, p), t[n], p));
        for (auto v : t.values) CHECK((v > 0 && v < p));
        for (std::int64_t k : {-3, 1, 5}) {
            const Rational x(3, 4);
            CHECK(gamma_at_rational(t, x) == gamma_at_rational(t, x + Rational(static_cast<std::int64_t>(p) * k)));
        }
    }
}
