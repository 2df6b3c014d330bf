#include "hgm/remtree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hgm {

Mat2::Mat2(mpz_class m11, mpz_class m12, mpz_class m21, mpz_class m22)
    : e{std::move(m11), std::move(m12), std::move(m21), std::move(m22)} {}

Mat2 Mat2::lower_triangular(mpz_class a, mpz_class c, mpz_class d) {
    return Mat2(std::move(a), 0, std::move(c), std::move(d));
}

std::size_t Mat2::bits() const {
    std::size_t b = 0;
    for (const auto& x : e) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
    return b;
}

void mul_into(Mat2& out, const Mat2& a, const Mat2& b) {
    auto* o = out.e.data();
    const auto* x = a.e.data();
    const auto* y = b.e.data();
    if (a.is_lower_triangular() && b.is_lower_triangular()) {
        mpz_mul(o[0].get_mpz_t(), x[0].get_mpz_t(), y[0].get_mpz_t());
        mpz_set_ui(o[1].get_mpz_t(), 0);
        mpz_mul(o[2].get_mpz_t(), x[2].get_mpz_t(), y[0].get_mpz_t());
        mpz_addmul(o[2].get_mpz_t(), x[3].get_mpz_t(), y[2].get_mpz_t());
        mpz_mul(o[3].get_mpz_t(), x[3].get_mpz_t(), y[3].get_mpz_t());
        return;
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            mpz_ptr dst = o[2 * i + j].get_mpz_t();
            mpz_mul(dst, x[2 * i].get_mpz_t(), y[j].get_mpz_t());
            mpz_addmul(dst, x[2 * i + 1].get_mpz_t(), y[2 + j].get_mpz_t());
        }
    }
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    mul_into(out, a, b);
    return out;
}

void reduce(Mat2& a, const mpz_class& m) {
    for (auto& x : a.e) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

Mat2 reduced(Mat2 a, const mpz_class& m) {
    reduce(a, m);
    return a;
}

ModMat2 to_mod(const Mat2& a, std::uint64_t p) {
    ModMat2 out;
    mpz_class r;
    for (int k = 0; k < 4; ++k) {
        mpz_fdiv_r_ui(r.get_mpz_t(), a.e[k].get_mpz_t(), p);
        out.e[k] = r.get_ui();
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.e[0] << "," << m.e[1] << "],[" << m.e[2] << "," << m.e[3] << "]]";
}

namespace {

struct Accumulation {
    std::vector<Mat2> at_position;  // init * A_0 ... A_{n-1} mod moduli[n]
    Mat2 total;                     // A_0 ... A_{len-1} mod outer, only when requested
};

constexpr int kTrimLevels = 5;

std::size_t bit_size(const mpz_class& m) { return mpz_sizeinbase(m.get_mpz_t(), 2); }

// One accumulating remainder tree over positions 0..n-1. Leaf n carries A_n
// and modulus q_n. Padding leaves are identity matrices with unit modulus,
// so the root product is the full product when it is requested; nodes on the
// right spine are otherwise never used and are skipped. Near the root a node
// product is only needed modulo the moduli to its right (times `outer`).
Accumulation accumulate(std::vector<Mat2> leaves, std::span<const mpz_class> moduli, const Mat2& init,
                        bool want_total, const mpz_class& outer) {
    const std::size_t n = leaves.size();
    const std::size_t width = std::bit_ceil(n);
    const int depth = std::countr_zero(width);

    std::vector<std::vector<mpz_class>> mods(depth + 1);
    mods[depth].assign(moduli.begin(), moduli.end());
    mods[depth].resize(width, mpz_class(1));
    for (int level = depth - 1; level >= 0; --level) {
        const std::size_t count = std::size_t{1} << level;
        const auto& mc = mods[level + 1];
        auto& m = mods[level];
        m.resize(count);
        for (std::size_t j = 0; j < count; ++j)
            mpz_mul(m[j].get_mpz_t(), mc[2 * j].get_mpz_t(), mc[2 * j + 1].get_mpz_t());
    }

    const int trim = std::min(depth, kTrimLevels);
    std::vector<std::vector<mpz_class>> right(trim + 1);
    right[0].assign(1, want_total ? outer : mpz_class(1));
    for (int level = 1; level <= trim; ++level) {
        const std::size_t count = std::size_t{1} << level;
        right[level].resize(count);
        for (std::size_t j = 0; j < count; j += 2) {
            right[level][j + 1] = right[level - 1][j / 2];
            mpz_mul(right[level][j].get_mpz_t(), mods[level][j + 1].get_mpz_t(),
                    right[level - 1][j / 2].get_mpz_t());
        }
    }

    std::vector<std::vector<Mat2>> prods(depth + 1);
    prods[depth] = std::move(leaves);
    prods[depth].resize(width, Mat2::identity());
    for (int level = depth - 1; level >= 0; --level) {
        const std::size_t count = std::size_t{1} << level;
        auto& a = prods[level];
        const auto& ac = prods[level + 1];
        a.resize(count);
        for (std::size_t j = 0; j < count; ++j) {
            if (j + 1 == count && !want_total) continue;
            mul_into(a[j], ac[2 * j], ac[2 * j + 1]);
            if (level <= trim && a[j].bits() > bit_size(right[level][j])) reduce(a[j], right[level][j]);
        }
        if (level + 1 <= trim) std::vector<mpz_class>().swap(right[level + 1]);
    }

    Accumulation out;
    if (want_total) out.total = std::move(prods[0][0]);

    std::vector<Mat2> current(1, reduced(init, mods[0][0]));
    std::vector<Mat2> next;
    Mat2 factor, head, small;
    for (int level = 1; level <= depth; ++level) {
        const std::size_t count = std::size_t{1} << level;
        const auto& m = mods[level];
        const auto& a = prods[level];
        const auto& parent_mods = mods[level - 1];
        next.assign(count, Mat2::zero());
        for (std::size_t j = 0; j < count; ++j) {
            if (m[j] == 1) continue;
            const std::size_t parent = j / 2;
            const bool same = m[j] == parent_mods[parent];
            if (j % 2 == 0) {
                next[j] = current[parent];
                if (!same) reduce(next[j], m[j]);
                continue;
            }
            const Mat2* prefix = &current[parent];
            if (!same) {
                head = reduced(current[parent], m[j]);
                prefix = &head;
            }
            const Mat2* left = &a[j - 1];
            if (left->bits() > bit_size(m[j])) {
                small = reduced(*left, m[j]);
                left = &small;
            }
            mul_into(factor, *prefix, *left);
            reduce(factor, m[j]);
            next[j] = std::move(factor);
        }
        current.swap(next);
        // The products and moduli of the levels above are no longer needed.
        std::vector<Mat2>().swap(prods[level]);
        std::vector<mpz_class>().swap(mods[level - 1]);
    }
    current.resize(n);
    out.at_position = std::move(current);
    return out;
}

void check_cuts(std::span<const Mat2> matrices, std::span<const std::uint64_t> primes,
                std::span<const std::size_t> cuts) {
    if (primes.size() != cuts.size()) throw std::invalid_argument("one cut point is required per prime");
    for (auto c : cuts)
        if (c > matrices.size())
            throw std::invalid_argument("cut point " + std::to_string(c) + " exceeds matrix count " +
                                        std::to_string(matrices.size()));
    std::vector<std::uint64_t> sorted(primes.begin(), primes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("moduli must be distinct");
    for (auto p : primes)
        if (p < 2) throw std::invalid_argument("modulus must be at least 2");
}

}  // namespace

std::vector<Mat2> rem_tree(std::span<const Mat2> matrices, std::span<const mpz_class> moduli) {
    if (matrices.size() != moduli.size()) throw std::invalid_argument("rem_tree: length mismatch");
    if (matrices.empty()) return {};
    for (const auto& m : moduli)
        if (m <= 0) throw std::invalid_argument("rem_tree: moduli must be positive");
    auto result = accumulate(std::vector<Mat2>(matrices.begin(), matrices.end()), moduli, Mat2::identity(), false,
                             mpz_class(1));
    result.at_position[0] = Mat2::identity();
    return std::move(result.at_position);
}

std::vector<Mat2> rem_tree_with_spacing(std::span<const Mat2> matrices, std::span<const std::uint64_t> primes,
                                        std::span<const std::size_t> cuts) {
    return rem_forest(std::vector<Mat2>(matrices.begin(), matrices.end()), primes, cuts, 1);
}

std::vector<Mat2> rem_forest(std::vector<Mat2> matrices, std::span<const std::uint64_t> primes,
                             std::span<const std::size_t> cuts, std::size_t forest_width) {
    if (forest_width == 0) throw std::invalid_argument("forest width must be at least 1");
    check_cuts(matrices, primes, cuts);
    const std::size_t positions = matrices.size() + 1;
    forest_width = std::min(forest_width, positions);

    std::vector<mpz_class> slot(positions, mpz_class(1));
    for (std::size_t i = 0; i < primes.size(); ++i) mpz_mul_ui(slot[cuts[i]].get_mpz_t(), slot[cuts[i]].get_mpz_t(), primes[i]);

    std::vector<std::size_t> bounds(forest_width + 1);
    for (std::size_t k = 0; k <= forest_width; ++k) bounds[k] = k * positions / forest_width;

    // suffix[k] = product of all moduli in chunks k, k+1, ...
    std::vector<mpz_class> suffix(forest_width + 1, mpz_class(1));
    for (std::size_t k = forest_width; k-- > 0;) {
        mpz_class chunk = 1;
        for (std::size_t t = bounds[k]; t < bounds[k + 1]; ++t)
            if (slot[t] != 1) chunk *= slot[t];
        suffix[k] = chunk * suffix[k + 1];
    }

    std::vector<Mat2> at_slot(positions);
    Mat2 carry = Mat2::identity();
    std::vector<Mat2> leaves;
    for (std::size_t k = 0; k < forest_width; ++k) {
        const std::size_t lo = bounds[k], hi = bounds[k + 1];
        if (lo == hi) continue;
        leaves.clear();
        for (std::size_t t = lo; t < hi; ++t)
            leaves.push_back(t < matrices.size() ? std::move(matrices[t]) : Mat2::identity());
        const bool more = suffix[k + 1] != 1;
        auto result = accumulate(std::move(leaves), std::span(slot).subspan(lo, hi - lo), carry, more, suffix[k + 1]);
        leaves = {};
        for (std::size_t t = lo; t < hi; ++t) at_slot[t] = std::move(result.at_position[t - lo]);
        if (more) {
            Mat2& total = result.total;
            if (total.bits() > bit_size(suffix[k + 1])) reduce(total, suffix[k + 1]);
            carry = carry * total;
            reduce(carry, suffix[k + 1]);
        }
    }

    std::vector<Mat2> out;
    out.reserve(primes.size());
    mpz_class p;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        p = primes[i];
        out.push_back(cuts[i] == 0 ? reduced(Mat2::identity(), p) : reduced(at_slot[cuts[i]], p));
    }
    return out;
}

std::size_t forest_width_for_budget(std::span<const std::uint64_t> primes, std::uint64_t bit_budget) {
    if (bit_budget == 0) throw std::invalid_argument("forest bit budget must be positive");
    double bits = 0;
    for (auto p : primes) bits += std::log2(static_cast<double>(p));
    auto width = static_cast<std::size_t>(std::ceil(bits / static_cast<double>(bit_budget)));
    return std::max<std::size_t>(width, 1);
}

std::size_t balanced_forest_width(std::span<const Mat2> matrices, std::span<const std::uint64_t> primes) {
    double modulus_bits = 0;
    for (auto p : primes) modulus_bits += std::log2(static_cast<double>(p));
    double matrix_bits = 0;
    for (const auto& m : matrices) matrix_bits += static_cast<double>(m.bits());
    if (modulus_bits < 1) return 1;
    const auto width = static_cast<std::size_t>(matrix_bits / modulus_bits);
    return std::clamp<std::size_t>(width, 1, std::max<std::size_t>(matrices.size(), 1));
}

}  // namespace hgm
