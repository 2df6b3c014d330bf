// Acceptance suite: one PASS/FAIL line per criterion.
#include "hgm/amortized.hpp"
#include "hgm/cli.hpp"
#include "hgm/modular.hpp"
#include "hgm/oracle.hpp"
#include "hgm/padic.hpp"
#include "hgm/remtree.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace hgm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failures of a criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    Outcome outcome(const std::string& summary) const {
        std::ostringstream os;
        os << summary << ", " << checks_ << " checks";
        if (failures_) os << ", " << failures_ << " failed: " << notes_.str();
        return {failures_ == 0, os.str()};
    }

private:
    std::size_t checks_ = 0, failures_ = 0;
    std::ostringstream notes_;
};

std::vector<Rational> Q(std::initializer_list<const char*> xs) {
    std::vector<Rational> out;
    for (auto x : xs) out.push_back(Rational::parse(x));
    return out;
}

HypergeometricDatum example() {
    return normalize(Q({"1/4", "1/2", "1/2", "3/4"}), Q({"1/3", "1/3", "2/3", "2/3"}), Rational(1, 5));
}

ModMat2 M(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) { return ModMat2{{a, b, c, d}}; }

IntegerPolynomial poly(std::initializer_list<long> ascending) {
    IntegerPolynomial out;
    for (auto c : ascending) out.coeffs.emplace_back(c);
    return out;
}

std::string str(const ModMat2& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

Outcome worked_example() {
    Checker c;
    const auto d = example();
    const auto s = motive_spec(d);
    const auto p2 = interval_polynomials(d, s, 2, 1);
    const auto p4 = interval_polynomials(d, s, 4, 1);
    c.expect(p2.shift == Shift{Rational(2, 3), 1}, "delta_2, epsilon_2");
    c.expect(p4.shift == Shift{Rational(1, 3), 1}, "delta_4, epsilon_4");
    c.expect(p2.f == poly({55, 852, 4428, 8640, 5184}), "f_2");
    c.expect(p2.g == poly({2880, 23040, 63360, 69120, 25920}), "g_2");
    c.expect(p4.f == poly({175, 2820, 9612, 12096, 5184}), "f_4");
    c.expect(p4.g == poly({11520, 57600, 106560, 86400, 25920}), "g_4");
    c.expect(p2.sigma == -1 && p4.sigma == -1, "sigma_2 = sigma_4 = -1");
    c.expect(break_index(s.breaks[2], 67) == 22 && break_index(s.breaks[3], 67) == 33, "(m_2, m_3)");
    c.expect(break_index(s.breaks[4], 67) == 44 && break_index(s.breaks[5], 67) == 49, "(m_4, m_5)");

    const std::vector<ModMat2> S{M(38, 0, 0, 62), M(50, 0, 0, 47), M(65, 0, 34, 5),
                                 M(1, 0, 0, 16),  M(54, 0, 25, 41), M(1, 0, 0, 38)};
    const std::vector<ModMat2> T{M(1, 0, 0, 6),   M(1, 0, 0, 31),  M(1, 0, 66, 12),
                                 M(1, 0, 66, 40), M(1, 0, 66, 40), M(1, 0, 66, 31)};
    const std::vector<std::uint64_t> p67{67};
    std::vector<ModMat2> Sgot, Tgot;
    for (std::size_t i = 0; i < 6; ++i) {
        const auto cls = static_cast<std::int64_t>(67 % s.breaks[i].den());
        Sgot.push_back(interval_products(d, i, cls, p67).at(67));
        Tgot.push_back(fix_break(d, s, i, 67).matrix);
        c.expect(Sgot[i] == S[i], "S_" + std::to_string(i) + " = " + str(Sgot[i]));
        c.expect(Tgot[i] == T[i], "T_" + std::to_string(i) + " = " + str(Tgot[i]));
    }
    const auto a = assemble(67, Sgot, Tgot);
    c.expect(a.S == M(21, 0, 33, 21), "S(67) = " + str(a.S));
    c.expect(a.h == 59, "H mod 67 = " + std::to_string(a.h));
    const auto all = traces(d, 67);
    c.expect(!all.empty() && all.back().p == 67 && all.back().h == 59, "traces at 67");
    c.expect(trace_mod_p_oracle(d, 67) == 59, "oracle at 67");
    return c.outcome("S(67) = " + str(a.S) + ", H = " + std::to_string(a.h));
}

HypergeometricDatum random_datum(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> index(1, 8);
    while (true) {
        std::vector<std::int64_t> A, B;
        for (int n = 0, k = 1 + static_cast<int>(rng() % 3); n < k; ++n) A.push_back(index(rng));
        for (int n = 0, k = 1 + static_cast<int>(rng() % 3); n < k; ++n) B.push_back(index(rng));
        try {
            auto [alpha, beta] = from_cyclotomic(A, B);
            if (alpha.size() > 6) continue;
            const std::int64_t num = static_cast<std::int64_t>(rng() % 19) - 9;
            const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 9);
            auto d = normalize(alpha, beta, Rational(num, den));
            motive_spec(d);
            return d;
        } catch (const DatumError&) {
        }
    }
}

std::string describe(const HypergeometricDatum& d) {
    std::ostringstream os;
    os << "(";
    for (std::size_t n = 0; n < d.alpha.size(); ++n) os << (n ? "," : "") << d.alpha[n];
    os << "),(";
    for (std::size_t n = 0; n < d.beta.size(); ++n) os << (n ? "," : "") << d.beta[n];
    os << ") z=" << d.z;
    return os.str();
}

Outcome oracle_equivalence() {
    Checker c;
    std::size_t primes = 0;
    auto sweep = [&](const HypergeometricDatum& d, std::uint64_t X) {
        const auto got = traces(d, X);
        std::size_t good = 0;
        for (auto p : primes_up_to(X)) good += is_good(d, p) ? 1 : 0;
        c.expect(got.size() == good, describe(d) + ": record count");
        for (const auto& r : got) {
            c.expect(r.h == trace_mod_p_oracle(d, r.p), describe(d) + " at p = " + std::to_string(r.p));
            ++primes;
        }
    };
    sweep(example(), 1 << 13);
    std::mt19937_64 rng(2718);
    for (int n = 0; n < 5; ++n) sweep(random_datum(rng), 1 << 10);
    return c.outcome(std::to_string(primes) + " primes over 6 data");
}

// p + 1 - #E(F_p) for y^2 = -x(x-1)(x-z).
std::int64_t elliptic_trace(const Rational& z, std::uint64_t p) {
    const std::uint64_t zp = z.mod(p);
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t f = mul_mod(mul_mod(x, sub_mod(x, 1, p), p), sub_mod(x, zp, p), p);
        f = sub_mod(0, f, p);
        if (f != 0) sum += pow_mod(f, (p - 1) / 2, p) == 1 ? 1 : -1;
    }
    return -sum;
}

Outcome elliptic() {
    Checker c;
    std::size_t lifted = 0;
    for (const Rational z : {Rational(2), Rational(3), Rational(1, 2)}) {
        const auto d = normalize(Q({"1/2", "1/2"}), Q({"0", "0"}), z);
        const auto spec = motive_spec(d);
        for (const auto& r : traces(d, 500)) {
            const std::int64_t a = elliptic_trace(z, r.p);
            const std::string where = "z=" + z.str() + ", p=" + std::to_string(r.p);
            c.expect(r.h == reduce_signed(a, r.p), where);
            if (r.p > 16) {
                const auto l = cli::lift_weight_one(r.h, r.p, spec.r, spec.w);
                c.expect(l.value == a, where + " lift");
                ++lifted;
            }
        }
    }
    return c.outcome(std::to_string(lifted) + " exact lifts");
}

Mat2 prefix_mod(const std::vector<Mat2>& ms, std::size_t n, const mpz_class& m) {
    Mat2 acc = Mat2::identity();
    for (std::size_t k = 0; k < n; ++k) acc = reduced(acc * ms[k], m);
    return reduced(acc, m);
}

Outcome remainder_trees() {
    Checker c;
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t b = 1 + rng() % 64;
        std::vector<Mat2> ms;
        for (std::size_t k = 0; k < b; ++k) {
            auto entry = [&] { return mpz_class(static_cast<unsigned long>(rng() % (std::uint64_t{1} << 32))); };
            ms.emplace_back(entry(), trial % 2 ? entry() : mpz_class(0), entry(), entry());
        }
        std::set<std::uint64_t> pool;
        while (pool.size() < b) {
            const std::uint64_t q = 2 + rng() % (std::uint64_t{1} << 31);
            if (is_prime(q)) pool.insert(q);
        }
        std::vector<std::uint64_t> primes(pool.begin(), pool.end());
        std::shuffle(primes.begin(), primes.end(), rng);

        std::vector<mpz_class> mods{1};
        for (std::size_t k = 1; k < b; ++k) mods.emplace_back(static_cast<unsigned long>(primes[k]));
        const auto tree = rem_tree(ms, mods);
        for (std::size_t n = 1; n < b; ++n)
            c.expect(tree[n] == prefix_mod(ms, n, mods[n]), "rem_tree trial " + std::to_string(trial));

        std::vector<std::size_t> cuts;
        for (std::size_t n = 0; n < b; ++n) cuts.push_back(rng() % (b + 1));
        std::vector<Mat2> direct;
        for (std::size_t n = 0; n < b; ++n)
            direct.push_back(prefix_mod(ms, cuts[n], mpz_class(static_cast<unsigned long>(primes[n]))));
        c.expect(rem_tree_with_spacing(ms, primes, cuts) == direct, "spacing trial " + std::to_string(trial));
        for (std::size_t width : {1, 4, 17})
            c.expect(rem_forest(ms, primes, cuts, width) == direct,
                     "forest width " + std::to_string(width) + " trial " + std::to_string(trial));
    }
    return c.outcome("100 instances");
}

Outcome scaling() {
    const auto d = example();
    const TraceOptions options;
    cli::run_bench(d, {1 << 12}, 1 << 12, 1, options);  // warm-up

    std::vector<std::uint64_t> big, small;
    for (int k = 16; k <= 20; ++k) big.push_back(std::uint64_t{1} << k);
    for (int k = 10; k <= 14; ++k) small.push_back(std::uint64_t{1} << k);
    const auto amortized = cli::run_bench(d, big, 0, 3, options);
    const auto oracle = cli::run_bench(d, small, small.back(), 3, options);

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    double sum = 0;
    os << "amortized ratios";
    for (std::size_t n = 1; n < amortized.size(); ++n) {
        const double r = amortized[n].amortized_seconds / amortized[n - 1].amortized_seconds;
        sum += r;
        os << " " << r;
    }
    const double mean = sum / static_cast<double>(amortized.size() - 1);
    os << " (mean " << mean << ", limit 2.60; " << amortized.back().amortized_seconds << " s at 2^20)";
    bool pass = mean <= 2.6;
    os << ", oracle ratios";
    for (std::size_t n = 1; n < oracle.size(); ++n) {
        const double r = *oracle[n].oracle_seconds / *oracle[n - 1].oracle_seconds;
        pass = pass && r >= 3.4;
        os << " " << r;
    }
    os << " (each at least 3.40)";
    return {pass, os.str()};
}

Outcome gamma_properties() {
    Checker c;
    std::size_t tables = 0;
    for (auto p : primes_up_to(200)) {
        if (p == 2) continue;
        const auto t = gamma_table(p);
        ++tables;
        c.expect(t[0] == 1 && t[1] == p - 1, "Gamma_p(1) at p = " + std::to_string(p));
        for (std::uint64_t n = 0; n + 1 < p; ++n)
            c.expect(t[n + 1] == mul_mod(omega(n, p), t[n], p), "functional equation at p = " + std::to_string(p));
        for (auto v : t.values) c.expect(v % p != 0, "unit at p = " + std::to_string(p));
    }
    return c.outcome(std::to_string(tables) + " tables");
}

Outcome shift_lemma() {
    Checker c;
    std::mt19937_64 rng(500);
    int tested = 0;
    while (tested < 500) {
        const std::int64_t b = 1 + static_cast<std::int64_t>(rng() % 64);
        const Rational gamma(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(b)), b);
        const std::uint64_t p = 3 + rng() % 100000;
        if (!is_prime(p) || gamma.den() % static_cast<std::int64_t>(p) == 0) continue;
        const auto s = rational_shift(gamma, static_cast<std::int64_t>(p % static_cast<std::uint64_t>(gamma.den())));
        const std::string where = gamma.str() + " at p = " + std::to_string(p);
        c.expect(s.epsilon == 1 || s.epsilon == 2, where + " epsilon");
        c.expect(s.delta >= Rational(0) && s.delta <= Rational(1) && gamma.den() % s.delta.den() == 0,
                 where + " delta");
        c.expect(reduce_signed(break_index(gamma, p) + s.epsilon, p) == s.delta.mod(p), where);
        ++tested;
    }
    return c.outcome("500 pairs");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"worked example at p = 67", worked_example},
        {"oracle equivalence", oracle_equivalence},
        {"elliptic curve cross-check", elliptic},
        {"remainder tree correctness", remainder_trees},
        {"scaling", scaling},
        {"p-adic gamma properties", gamma_properties},
        {"shift lemma", shift_lemma},
    };
    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[n].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << n + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[n].first << ": "
                  << o.detail << " [" << std::fixed << std::setprecision(1) << secs << " s]" << std::endl;
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
