#pragma once

// The Fourier-index lattice S of half-integral hermitian 2x2 matrices
// B = [[t1, u/2], [conj(u)/2, t3]]: diagonal integral, off-diagonal
// stored doubled so that everything lives in Z[i].

#include <algorithm>
#include <optional>
#include <vector>

#include "gauss.hpp"

namespace caplift {

struct HermitianIndex {
    Int t1;
    GaussInt u;  // doubled off-diagonal entry: B_12 = u/2
    Int t3;

    HermitianIndex() : t1(0), u(), t3(0) {}
    HermitianIndex(Int a, GaussInt b, Int c) : t1(std::move(a)), u(std::move(b)), t3(std::move(c)) {}
    HermitianIndex(long a, GaussInt b, long c) : t1(a), u(std::move(b)), t3(c) {}
    HermitianIndex(long a, long c) : t1(a), u(), t3(c) {}

    bool is_zero() const { return t1 == 0 && t3 == 0 && u.is_zero(); }

    // 4 det B; always a rational integer on S
    Int det4() const { return 4 * t1 * t3 - u.norm(); }

    bool positive_definite() const { return t1 > 0 && det4() > 0; }

    HermitianIndex scaled(const Int& c) const { return {c * t1, c * u, c * t3}; }

    bool operator==(const HermitianIndex& o) const {
        return t1 == o.t1 && t3 == o.t3 && u == o.u;
    }
    bool operator!=(const HermitianIndex& o) const { return !(*this == o); }

    // deterministic table order: (det4, t1, t3, re u, im u)
    bool operator<(const HermitianIndex& o) const {
        Int d = det4(), e = o.det4();
        if (d != e) return d < e;
        if (t1 != o.t1) return t1 < o.t1;
        if (t3 != o.t3) return t3 < o.t3;
        if (u.re != o.u.re) return u.re < o.u.re;
        return u.im < o.u.im;
    }

    std::string str() const {
        return "[" + t1.get_str() + "," + u.str() + "," + t3.get_str() + "]";
    }
};

inline Int det4(const HermitianIndex& b) { return b.det4(); }

// Content epsilon(B): the largest q > 0 with B/q still half-integral.
inline Int epsilon(const HermitianIndex& b) {
    if (b.is_zero()) throw std::domain_error("epsilon: B = 0");
    Int g = gcd_int(gcd_int(abs(b.t1), abs(b.t3)), gcd_int(abs(b.u.re), abs(b.u.im)));
    return g;
}

// (1/divisor) g^* B g, if the result lies in S; otherwise nullopt and the
// caller treats the coefficient as 0.
inline std::optional<HermitianIndex> conj_transform(const Mat2K& g, const HermitianIndex& b,
                                                    const Int& divisor) {
    // work with 2B (entries in O_K), so 2B' = g^* (2B) g / divisor
    Mat2K twob{KElem(GaussInt(2 * b.t1)), KElem(b.u),
               KElem(b.u.conj()), KElem(GaussInt(2 * b.t3))};
    Mat2K r = g.conj_transpose() * twob * g;
    KElem d{GaussInt(1), divisor};
    KElem a11 = r.a * d, a12 = r.b * d, a22 = r.d * d;
    // need a11, a22 in 2Z and a12 in O_K
    if (!a12.is_integral()) return std::nullopt;
    if (!a11.is_integral() || !a22.is_integral()) return std::nullopt;
    if (a11.num.im != 0 || a22.num.im != 0) return std::nullopt;
    if (a11.num.re % 2 != 0 || a22.num.re % 2 != 0) return std::nullopt;
    return HermitianIndex{a11.num.re / 2, a12.num, a22.num.re / 2};
}

// All positive-definite B with det4(B) <= det4_max and t1, t3 <= t1_max,
// sorted by (det4, t1, t3, re u, im u).
inline std::vector<HermitianIndex> enumerate_indices(long det4_max, long t1_max) {
    std::vector<HermitianIndex> out;
    if (det4_max <= 0 || t1_max <= 0) return out;
    for (long t1 = 1; t1 <= t1_max; ++t1)
        for (long t3 = 1; t3 <= t1_max; ++t3) {
            long nmax = 4 * t1 * t3 - 1;  // positive definite: N(u) < 4 t1 t3
            long r = static_cast<long>(std::sqrt(static_cast<double>(nmax))) + 1;
            for (long x = -r; x <= r; ++x)
                for (long y = -r; y <= r; ++y) {
                    long n = x * x + y * y;
                    if (n > nmax) continue;
                    long d4 = 4 * t1 * t3 - n;
                    if (d4 > det4_max) continue;
                    out.emplace_back(Int(t1), GaussInt(x, y), Int(t3));
                }
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace caplift
