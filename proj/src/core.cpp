#include "hgm/core.hpp"

#include "hgm/modular.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace hgm {

namespace {

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        while (n % q == 0) n /= q;
        result -= result / q;
    }
    if (n > 1) result -= result / n;
    return result;
}

bool balanced_tuple(std::span<const Rational> xs) {
    std::map<std::int64_t, std::map<std::int64_t, int>> by_den;
    for (const auto& x : xs) ++by_den[x.den()][x.num()];
    for (const auto& [den, counts] : by_den) {
        if (static_cast<std::int64_t>(counts.size()) != euler_phi(den)) return false;
        int first = counts.begin()->second;
        for (const auto& entry : counts)
            if (entry.second != first) return false;
    }
    return true;
}

std::string join(std::span<const Rational> xs) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += xs[i].str();
    }
    return s + ")";
}

bool contains(std::span<const Rational> xs, const Rational& x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

std::string_view to_string(PrimeKind kind) {
    switch (kind) {
        case PrimeKind::good: return "good";
        case PrimeKind::wild: return "wild";
        case PrimeKind::tame: return "tame";
        case PrimeKind::excluded_small: return "excluded-small";
    }
    return "unknown";
}

bool is_balanced(std::span<const Rational> alpha, std::span<const Rational> beta) {
    return balanced_tuple(alpha) && balanced_tuple(beta);
}

HypergeometricDatum normalize(std::vector<Rational> alpha, std::vector<Rational> beta, Rational z) {
    if (alpha.empty() || alpha.size() != beta.size())
        throw DatumError("alpha and beta must be nonempty tuples of equal length");
    for (const auto* tuple : {&alpha, &beta})
        for (const auto& x : *tuple)
            if (x < Rational(0) || x >= Rational(1))
                throw DatumError("datum entry " + x.str() + " outside [0,1)");
    if (z == Rational(0) || z == Rational(1)) throw DatumError("z must not be 0 or 1");
    std::sort(alpha.begin(), alpha.end());
    std::sort(beta.begin(), beta.end());
    for (const auto& a : alpha)
        if (contains(beta, a)) throw DatumError("alpha and beta share the entry " + a.str());
    if (!is_balanced(alpha, beta))
        throw DatumError("datum " + join(alpha) + "," + join(beta) + " is not balanced");
    if (contains(alpha, Rational(0))) return {std::move(beta), std::move(alpha), Rational(1) / z};
    return {std::move(alpha), std::move(beta), z};
}

std::pair<std::vector<Rational>, std::vector<Rational>> from_cyclotomic(std::span<const std::int64_t> A,
                                                                        std::span<const std::int64_t> B) {
    auto expand = [](std::span<const std::int64_t> indices) {
        if (indices.empty()) throw DatumError("cyclotomic index list must be nonempty");
        std::vector<Rational> out;
        for (auto n : indices) {
            if (n < 1) throw DatumError("cyclotomic index must be positive, got " + std::to_string(n));
            for (std::int64_t k = 0; k < n; ++k)
                if (std::gcd(k, n) == 1) out.emplace_back(k, n);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto alpha = expand(A);
    auto beta = expand(B);
    if (alpha.size() != beta.size())
        throw DatumError("cyclotomic degree mismatch: " + std::to_string(alpha.size()) +
                         " != " + std::to_string(beta.size()));
    for (const auto& a : alpha)
        if (contains(beta, a)) throw DatumError("cyclotomic data overlap at " + a.str());
    return {std::move(alpha), std::move(beta)};
}

int zigzag(const HypergeometricDatum& datum, const Rational& x) {
    int z = 0;
    for (const auto& a : datum.alpha) z += a <= x;
    for (const auto& b : datum.beta) z -= b <= x;
    return z;
}

MotiveSpec motive_spec(const HypergeometricDatum& datum) {
    MotiveSpec spec;
    spec.r = static_cast<int>(datum.degree());
    int zmax = std::numeric_limits<int>::min();
    int zmin = std::numeric_limits<int>::max();
    for (const auto& a : datum.alpha) zmax = std::max(zmax, zigzag(datum, a));
    for (const auto& b : datum.beta) zmin = std::min(zmin, zigzag(datum, b));
    spec.w = zmax - zmin - 1;
    spec.xi_beta = static_cast<int>(std::count(datum.beta.begin(), datum.beta.end(), Rational(0)));
    int twice_D = spec.w + 1 - spec.xi_beta;
    if (twice_D % 2 != 0)
        throw DatumError("twist D = (" + std::to_string(spec.w) + " + 1 - " + std::to_string(spec.xi_beta) +
                         ")/2 is not an integer");
    spec.D = twice_D / 2;

    spec.breaks = datum.alpha;
    spec.breaks.insert(spec.breaks.end(), datum.beta.begin(), datum.beta.end());
    spec.breaks.push_back(Rational(0));
    spec.breaks.push_back(Rational(1));
    std::sort(spec.breaks.begin(), spec.breaks.end());
    spec.breaks.erase(std::unique(spec.breaks.begin(), spec.breaks.end()), spec.breaks.end());

    for (const auto* tuple : {&datum.alpha, &datum.beta})
        for (const auto& x : *tuple) spec.b = std::lcm(spec.b, x.den());
    return spec;
}

PrimeClass classify_prime(const HypergeometricDatum& datum, std::uint64_t p) {
    PrimeClass pc;
    pc.p = p;
    auto divides = [p](std::int64_t n) { return reduce_signed(n, p) == 0; };
    for (const auto* tuple : {&datum.alpha, &datum.beta})
        for (const auto& x : *tuple) pc.wild = pc.wild || divides(x.den());
    Rational zm1 = datum.z - Rational(1);
    pc.tame = divides(datum.z.num()) || divides(datum.z.den()) || divides(zm1.num());
    if (pc.wild)
        pc.kind = PrimeKind::wild;
    else if (pc.tame)
        pc.kind = PrimeKind::tame;
    else if (p == 2)
        pc.kind = PrimeKind::excluded_small;
    else
        pc.kind = PrimeKind::good;
    return pc;
}

std::vector<PrimeClass> classify_primes(const HypergeometricDatum& datum, std::uint64_t X) {
    std::vector<PrimeClass> out;
    for (auto p : primes_up_to(X)) out.push_back(classify_prime(datum, p));
    return out;
}

}  // namespace hgm
