#include "hgm/amortized.hpp"

#include "hgm/oracle.hpp"
#include "hgm/padic.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace hgm {

namespace {

mpz_class to_mpz(std::int64_t v) {
    mpz_class out;
    mpz_set_si(out.get_mpz_t(), v);
    return out;
}

mpq_class to_mpq(const Rational& x) {
    mpq_class q(to_mpz(x.num()), to_mpz(x.den()));
    q.canonicalize();
    return q;
}

// Multiplies `poly` (ascending coefficients) by (k + root).
void mul_linear(std::vector<mpq_class>& poly, const mpq_class& root) {
    poly.push_back(0);
    for (std::size_t n = poly.size() - 1; n > 0; --n) poly[n] = poly[n - 1] + root * poly[n];
    poly[0] = root * poly[0];
}


std::vector<mpq_class> expand(std::span<const Rational> xs, const Rational& gamma, const Shift& shift,
                              const mpq_class& leading) {
    std::vector<mpq_class> poly{leading};
    for (const auto& x : xs)
        mul_linear(poly, to_mpq(x + shift.delta + Rational(iota(x, gamma)) - Rational(shift.epsilon)));
    return poly;
}

std::int64_t max_break_denominator(const MotiveSpec& spec) {
    std::int64_t m = 1;
    for (const auto& g : spec.breaks) m = std::max(m, g.den());
    return m;
}

int signed_unit_if_zero(int exponent, int parity_source) {
    if (exponent != 0) return 0;
    return parity_source % 2 == 0 ? 1 : -1;
}

std::uint64_t signed_residue(int v, std::uint64_t p) { return reduce_signed(v, p); }

}  // namespace

Shift rational_shift(const Rational& gamma, std::int64_t c) {
    const std::int64_t a = gamma.num();
    const std::int64_t b = gamma.den();
    std::int64_t cm = c % b;
    if (cm < 0) cm += b;
    if (std::gcd(cm, b) != 1)
        throw DatumError("residue class " + std::to_string(c) + " is not a unit mod " + std::to_string(b));
    std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(a) * (cm - 1)) % b);
    if (r < 0) r += b;
    if (a + r < b) return {Rational(b - a - r, b), 1};
    return {Rational(2 * b - a - r, b), 2};
}

mpz_class IntegerPolynomial::operator()(const mpz_class& k) const {
    mpz_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc *= k;
        acc += *it;
    }
    return acc;
}

int sigma_value(const MotiveSpec& spec, const HypergeometricDatum& datum, std::size_t i) {
    const int zig = zigzag(datum, spec.breaks.at(i));
    return signed_unit_if_zero(zig + spec.xi_beta + spec.D, zig);
}

IntervalPlan interval_polynomials(const HypergeometricDatum& datum, const MotiveSpec& spec, std::size_t i,
                                  std::int64_t c) {
    if (i >= spec.interval_count()) throw std::out_of_range("interval index " + std::to_string(i));
    const Rational& gamma = spec.breaks[i];
    IntervalPlan plan;
    plan.i = i;
    plan.modulus = gamma.den();
    plan.c = ((c % plan.modulus) + plan.modulus) % plan.modulus;
    plan.shift = rational_shift(gamma, plan.c);
    plan.sigma = sigma_value(spec, datum, i);

    auto F = expand(datum.alpha, gamma, plan.shift, to_mpq(datum.z));
    auto G = expand(datum.beta, gamma, plan.shift, mpq_class(1));
    plan.d = 1;
    for (const auto* poly : {&F, &G})
        for (const auto& coeff : *poly) mpz_lcm(plan.d.get_mpz_t(), plan.d.get_mpz_t(), coeff.get_den_mpz_t());
    for (const auto& coeff : F) plan.f.coeffs.push_back(mpz_class(coeff * plan.d));
    for (const auto& coeff : G) plan.g.coeffs.push_back(mpz_class(coeff * plan.d));
    return plan;
}

IntervalPlan interval_polynomials(const HypergeometricDatum& datum, std::size_t i, std::int64_t c) {
    return interval_polynomials(datum, motive_spec(datum), i, c);
}

Mat2 a_matrix(const IntervalPlan& plan, std::int64_t k) {
    const mpz_class kk = to_mpz(k);
    mpz_class g = plan.g(kk);
    mpz_class lower = plan.sigma == 0 ? mpz_class(0) : (plan.sigma > 0 ? g : mpz_class(-g));
    return Mat2::lower_triangular(g, std::move(lower), plan.f(kk));
}

std::int64_t break_index(const Rational& gamma, std::uint64_t p) {
    return (gamma * Rational(static_cast<std::int64_t>(p - 1))).floor();
}

std::size_t interval_cut(const MotiveSpec& spec, std::size_t i, std::uint64_t p) {
    std::int64_t n = break_index(spec.breaks.at(i + 1), p) - break_index(spec.breaks.at(i), p) - 1;
    return n > 0 ? static_cast<std::size_t>(n) : 0;
}

namespace {

std::map<std::uint64_t, ModMat2> run_plan(const IntervalPlan& plan, const MotiveSpec& spec,
                                          std::span<const std::uint64_t> primes, std::uint64_t forest_bits) {
    std::map<std::uint64_t, ModMat2> out;
    if (primes.empty()) return out;
    std::vector<std::size_t> cuts;
    cuts.reserve(primes.size());
    for (auto p : primes) {
        if (reduce_signed(plan.c, static_cast<std::uint64_t>(plan.modulus)) !=
            p % static_cast<std::uint64_t>(plan.modulus))
            throw std::invalid_argument("prime " + std::to_string(p) + " is not in class " +
                                        std::to_string(plan.c) + " mod " + std::to_string(plan.modulus));
        cuts.push_back(interval_cut(spec, plan.i, p));
    }
    const std::size_t count = *std::max_element(cuts.begin(), cuts.end());
    std::vector<Mat2> mats;
    mats.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) mats.push_back(a_matrix(plan, static_cast<std::int64_t>(k)));
    const std::size_t width =
        std::max(forest_width_for_budget(primes, forest_bits), balanced_forest_width(mats, primes));
    auto results = rem_forest(std::move(mats), primes, cuts, width);
    for (std::size_t n = 0; n < primes.size(); ++n) out.emplace(primes[n], to_mod(results[n], primes[n]));
    return out;
}

}  // namespace

std::map<std::uint64_t, ModMat2> interval_products(const HypergeometricDatum& datum, std::size_t i,
                                                   std::int64_t c, std::span<const std::uint64_t> primes,
                                                   std::uint64_t forest_bits) {
    const MotiveSpec spec = motive_spec(datum);
    return run_plan(interval_polynomials(datum, spec, i, c), spec, primes, forest_bits);
}

int tau_value(const MotiveSpec& spec, const HypergeometricDatum& datum, std::size_t i, std::uint64_t p) {
    if (i == 0) return spec.D == 0 ? 1 : 0;
    const int zig = zigzag(datum, spec.breaks.at(i - 1));
    const auto m = static_cast<std::uint64_t>(break_index(spec.breaks.at(i), p));
    return signed_unit_if_zero(zig + xi_m(datum.beta, m, p) + spec.D, zig);
}

BreakMatrix fix_break(const HypergeometricDatum& datum, const MotiveSpec& spec, std::size_t i, std::uint64_t p) {
    const std::int64_t m = break_index(spec.breaks.at(i), p);
    const std::int64_t pm1 = static_cast<std::int64_t>(p - 1);
    const std::uint64_t m_res = static_cast<std::uint64_t>(m) % p;
    auto h = [&](const Rational& x) {
        const std::uint64_t x_res = x.mod(p);
        const std::uint64_t here = omega(add_mod(x_res, m_res, p), p);
        const std::uint64_t next = omega(add_mod(add_mod(x_res, m_res, p), 1 % p, p), p);
        // Compare x (p - 1) with m and m + 1 exactly: x = a/d.
        const __int128 lhs = static_cast<__int128>(x.num()) * pm1;
        const __int128 at_m = static_cast<__int128>(m) * x.den();
        if (lhs < at_m) return next;
        if (lhs >= at_m + x.den()) return here;
        return mul_mod(next, here, p);
    };
    std::uint64_t num = datum.z.mod(p), den = 1;
    for (const auto& a : datum.alpha) num = mul_mod(num, h(a), p);
    for (const auto& b : datum.beta) den = mul_mod(den, h(b), p);
    if (num == 0 || den == 0)
        throw InvariantError("break factor vanishes at p = " + std::to_string(p) + ", break " + std::to_string(i));
    BreakMatrix out;
    out.i = i;
    out.p = p;
    out.matrix.at(0, 0) = 1;
    out.matrix.at(0, 1) = 0;
    out.matrix.at(1, 0) = signed_residue(tau_value(spec, datum, i, p), p);
    out.matrix.at(1, 1) = mul_mod(num, inv_mod(den, p), p);
    return out;
}

BreakMatrix fix_break(const HypergeometricDatum& datum, std::size_t i, std::uint64_t p) {
    return fix_break(datum, motive_spec(datum), i, p);
}

AssembledTrace assemble(std::uint64_t p, std::span<const ModMat2> interval_mats,
                        std::span<const ModMat2> break_mats) {
    if (interval_mats.size() != break_mats.size())
        throw std::invalid_argument("assemble: need one break matrix per interval");
    AssembledTrace out;
    out.p = p;
    for (std::size_t i = 0; i < interval_mats.size(); ++i) {
        out.S = mul(out.S, break_mats[i], p);
        out.S = mul(out.S, interval_mats[i], p);
    }
    if (out.S.at(0, 0) == 0) throw InvariantError("S(p)_11 vanishes mod p = " + std::to_string(p));
    out.h = mul_mod(out.S.at(1, 0), inv_mod(out.S.at(0, 0), p), p);
    return out;
}

bool amortizable(const MotiveSpec& spec, std::uint64_t p) {
    if (p < static_cast<std::uint64_t>(max_break_denominator(spec)) + 2) return false;
    for (std::size_t i = 0; i + 1 < spec.breaks.size(); ++i)
        if (break_index(spec.breaks[i + 1], p) <= break_index(spec.breaks[i], p)) return false;
    return true;
}

std::vector<TraceResult> traces(const HypergeometricDatum& datum, std::uint64_t X, const TraceOptions& options) {
    const MotiveSpec spec = motive_spec(datum);
    const std::size_t s = spec.interval_count();

    std::vector<std::uint64_t> fast;      // good primes for the remainder trees
    std::vector<std::uint64_t> fallback;  // good primes too small for them
    for (auto p : primes_up_to(X)) {
        if (classify_prime(datum, p).kind != PrimeKind::good) continue;
        (amortizable(spec, p) ? fast : fallback).push_back(p);
    }

    struct Job {
        IntervalPlan plan;
        std::vector<std::uint64_t> primes;
        std::vector<std::size_t> slots;  // indices into `fast`
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < s; ++i) {
        const std::int64_t b = spec.breaks[i].den();
        for (std::int64_t c = 0; c < b; ++c) {
            if (std::gcd(c, b) != 1) continue;
            Job job;
            for (std::size_t n = 0; n < fast.size(); ++n) {
                if (static_cast<std::int64_t>(fast[n] % static_cast<std::uint64_t>(b)) != c) continue;
                job.primes.push_back(fast[n]);
                job.slots.push_back(n);
            }
            if (job.primes.empty()) continue;
            job.plan = interval_polynomials(datum, spec, i, c);
            if (options.sigma_hook) job.plan.sigma = options.sigma_hook(i, job.plan.sigma);
            jobs.push_back(std::move(job));
        }
    }

    // interval_mats[n * s + i] = S_i(fast[n])
    std::vector<ModMat2> interval_mats(fast.size() * s);
    auto run_job = [&](const Job& job) {
        auto products = run_plan(job.plan, spec, job.primes, options.forest_bits);
        for (std::size_t k = 0; k < job.primes.size(); ++k)
            interval_mats[job.slots[k] * s + job.plan.i] = products.at(job.primes[k]);
    };
    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
    if (threads <= 1) {
        for (const auto& job : jobs) run_job(job);
    } else {
        // Largest jobs first keeps the workers balanced.
        std::vector<std::size_t> order(jobs.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return interval_cut(spec, jobs[a].plan.i, X) * jobs[a].primes.size() >
                   interval_cut(spec, jobs[b].plan.i, X) * jobs[b].primes.size();
        });
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
                    try {
                        run_job(jobs[order[k]]);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        workers.clear();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<TraceResult> out;
    out.reserve(fast.size() + fallback.size());
    std::vector<ModMat2> breaks(s);
    for (std::size_t n = 0; n < fast.size(); ++n) {
        const std::uint64_t p = fast[n];
        for (std::size_t i = 0; i < s; ++i) breaks[i] = fix_break(datum, spec, i, p).matrix;
        auto assembled = assemble(p, std::span(interval_mats).subspan(n * s, s), breaks);
        out.push_back({p, assembled.h, TraceSource::amortized});
    }
    for (auto p : fallback) out.push_back({p, trace_mod_p_oracle(datum, p), TraceSource::oracle_fallback});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
    return out;
}

}  // namespace hgm
