#pragma once

// Exact arithmetic over Z[i] and Q(i): the coefficient ring of every
// matrix transform in this library.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace caplift {

using Int = mpz_class;
using Rat = mpq_class;

inline Int gcd_int(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// GaussInt: a + bi with arbitrary-precision integer parts.

struct GaussInt {
    Int re;
    Int im;

    GaussInt() : re(0), im(0) {}
    GaussInt(Int r) : re(std::move(r)), im(0) {}
    GaussInt(long r) : re(r), im(0) {}
    GaussInt(Int r, Int i) : re(std::move(r)), im(std::move(i)) {}
    GaussInt(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    GaussInt conj() const { return {re, -im}; }
    Int norm() const { return re * re + im * im; }

    GaussInt operator-() const { return {-re, -im}; }
    GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussInt& operator+=(const GaussInt& o) { re += o.re; im += o.im; return *this; }
    GaussInt& operator-=(const GaussInt& o) { re -= o.re; im -= o.im; return *this; }
    GaussInt& operator*=(const GaussInt& o) { *this = *this * o; return *this; }

    bool operator==(const GaussInt& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussInt& o) const { return !(*this == o); }

    // lexicographic, for deterministic orderings only
    std::strong_ordering operator<=>(const GaussInt& o) const {
        if (int c = cmp(re, o.re); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (int c = cmp(im, o.im); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const {
        return re.get_str() + (sgn(im) >= 0 ? "+" : "") + im.get_str() + "i";
    }
};

inline GaussInt operator*(const Int& a, const GaussInt& z) { return {a * z.re, a * z.im}; }

// Rounded quotient: nearest Gaussian integer to a/b.  |a - q b|^2 <= N(b)/2.
inline GaussInt round_div(const GaussInt& a, const GaussInt& b) {
    Int n = b.norm();
    if (n == 0) throw std::domain_error("round_div by zero");
    GaussInt t = a * b.conj();  // a/b = t / n
    auto round_q = [&](const Int& x) {
        // nearest integer to x/n, ties toward +infinity
        Int num = 2 * x + n, den = 2 * n, q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return q;
    };
    return {round_q(t.re), round_q(t.im)};
}

inline bool divides(const GaussInt& d, const GaussInt& a) {
    Int n = d.norm();
    if (n == 0) return a.is_zero();
    GaussInt t = a * d.conj();
    return t.re % n == 0 && t.im % n == 0;
}

inline GaussInt exact_div(const GaussInt& a, const GaussInt& d) {
    Int n = d.norm();
    GaussInt t = a * d.conj();
    if (n == 0 || t.re % n != 0 || t.im % n != 0)
        throw std::domain_error("exact_div: not divisible");
    return {t.re / n, t.im / n};
}

inline GaussInt gcd(GaussInt a, GaussInt b) {
    while (!b.is_zero()) {
        GaussInt r = a - round_div(a, b) * b;
        a = b;
        b = r;
    }
    return a;
}

// Canonical associate: multiply by a unit so that re > 0, im >= 0,
// and (re,im) != (0,*). Zero stays zero.
inline GaussInt unit_normalize(GaussInt z) {
    if (z.is_zero()) return z;
    for (int j = 0; j < 3 && !(sgn(z.re) > 0 && sgn(z.im) >= 0); ++j)
        z = z * GaussInt(0, 1);
    if (!(sgn(z.re) > 0 && sgn(z.im) >= 0)) throw std::logic_error("unit_normalize");
    return z;
}

inline bool is_unit(const GaussInt& z) { return z.norm() == 1; }

// ---------------------------------------------------------------------------
// Prime splitting in Z[i].

enum class SplitKind { split, inert, ramified };

struct PrimeSplit {
    long p = 0;
    SplitKind kind = SplitKind::inert;
    GaussInt pi;  // generator of a prime above p (split/ramified only)
};

// Classify a rational prime in Z[i].  For split p the generator is the
// one with re > |im| > 0 (deterministic tie-break).
inline PrimeSplit split_prime(long p) {
    PrimeSplit s;
    s.p = p;
    if (p == 2) {
        s.kind = SplitKind::ramified;
        s.pi = GaussInt(1, 1);
        return s;
    }
    if (p % 4 == 3) {
        s.kind = SplitKind::inert;
        return s;
    }
    s.kind = SplitKind::split;
    for (long a = 1;; ++a) {
        long b2 = p - a * a;
        if (b2 <= 0) break;
        long b = static_cast<long>(std::sqrt(static_cast<double>(b2)));
        for (long bb = b - 1; bb <= b + 1; ++bb)
            if (bb > 0 && bb * bb == b2) {
                long x = a, y = bb;
                if (x < y) std::swap(x, y);
                s.pi = GaussInt(x, y);
                return s;
            }
    }
    throw std::logic_error("split_prime: no representation found");
}

// ---------------------------------------------------------------------------
// KElem: element of Q(i) as GaussInt numerator over a positive integer
// denominator, fully reduced.

struct KElem {
    GaussInt num;
    Int den;

    KElem() : num(), den(1) {}
    KElem(GaussInt n) : num(std::move(n)), den(1) {}
    KElem(long n) : num(n), den(1) {}
    KElem(GaussInt n, Int d) : num(std::move(n)), den(std::move(d)) { reduce(); }

    void reduce() {
        if (den == 0) throw std::domain_error("KElem: zero denominator");
        if (sgn(den) < 0) { den = -den; num = -num; }
        Int g = gcd_int(gcd_int(abs(num.re), abs(num.im)), den);
        if (g > 1) { num.re /= g; num.im /= g; den /= g; }
    }

    bool is_zero() const { return num.is_zero(); }
    bool is_integral() const { return den == 1; }

    KElem conj() const { return {num.conj(), den}; }
    Rat norm() const { return Rat(num.norm()) / Rat(den * den); }

    KElem operator-() const { return {-num, den}; }
    KElem operator+(const KElem& o) const { return {num * o.den + o.num * den, den * o.den}; }
    KElem operator-(const KElem& o) const { return {num * o.den - o.num * den, den * o.den}; }
    KElem operator*(const KElem& o) const { return {num * o.num, den * o.den}; }
    KElem inverse() const {
        Int n = num.norm();
        if (n == 0) throw std::domain_error("KElem: inverse of zero");
        // 1/(z/d) = d conj(z)/N(z)
        return {Int(den) * num.conj(), n};
    }
    KElem operator/(const KElem& o) const { return *this * o.inverse(); }

    bool operator==(const KElem& o) const { return num == o.num && den == o.den; }
    bool operator!=(const KElem& o) const { return !(*this == o); }

    std::string str() const { return "(" + num.str() + ")/" + den.get_str(); }
};

// ---------------------------------------------------------------------------
// 2x2 matrices over Q(i); enough linear algebra for index transforms and
// coset bookkeeping.

struct Mat2K {
    // row-major [[a, b], [c, d]]
    KElem a, b, c, d;

    static Mat2K identity() { return {KElem(1), KElem(0), KElem(0), KElem(1)}; }

    Mat2K operator*(const Mat2K& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2K operator+(const Mat2K& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2K operator-(const Mat2K& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2K conj_transpose() const { return {a.conj(), c.conj(), b.conj(), d.conj()}; }
    KElem det() const { return a * d - b * c; }
    Mat2K inverse() const {
        KElem dt = det();
        if (dt.is_zero()) throw std::domain_error("Mat2K: singular");
        KElem idt = dt.inverse();
        return {d * idt, -(b * idt), -(c * idt), a * idt};
    }
    Mat2K scaled(const KElem& s) const { return {a * s, b * s, c * s, d * s}; }
    bool is_integral() const {
        return a.is_integral() && b.is_integral() && c.is_integral() && d.is_integral();
    }
    bool operator==(const Mat2K& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

inline Mat2K mat2k(long a, long b, long c, long d) {
    return {KElem(a), KElem(b), KElem(c), KElem(d)};
}

inline Mat2K mat2k(GaussInt a, GaussInt b, GaussInt c, GaussInt d) {
    return {KElem(std::move(a)), KElem(std::move(b)), KElem(std::move(c)), KElem(std::move(d))};
}

// ---------------------------------------------------------------------------
// Smith normal form over Z[i] (Euclidean).  Returns the elementary divisor
// chain d_1 | d_2 | ... | d_n, unit-normalized.

template <size_t N>
inline std::array<GaussInt, N> smith_divisors(std::array<std::array<GaussInt, N>, N> m) {
    std::array<GaussInt, N> div{};
    size_t k = 0;
    while (k < N) {
        // find nonzero pivot of minimal norm
        bool any = false;
        size_t pi = k, pj = k;
        Int best;
        for (size_t i = k; i < N; ++i)
            for (size_t j = k; j < N; ++j)
                if (!m[i][j].is_zero()) {
                    Int n = m[i][j].norm();
                    if (!any || n < best) { any = true; best = n; pi = i; pj = j; }
                }
        if (!any) break;  // remaining divisors are zero
        std::swap(m[pi], m[k]);
        for (size_t i = 0; i < N; ++i) std::swap(m[i][pj], m[i][k]);
        // clear row and column by Euclidean reduction
        bool again = true;
        while (again) {
            again = false;
            for (size_t i = k + 1; i < N; ++i)
                if (!m[i][k].is_zero()) {
                    GaussInt q = round_div(m[i][k], m[k][k]);
                    for (size_t j = k; j < N; ++j) m[i][j] -= q * m[k][j];
                    if (!m[i][k].is_zero()) {
                        std::swap(m[i], m[k]);
                        again = true;
                    }
                }
            for (size_t j = k + 1; j < N; ++j)
                if (!m[k][j].is_zero()) {
                    GaussInt q = round_div(m[k][j], m[k][k]);
                    for (size_t i = k; i < N; ++i) m[i][j] -= q * m[i][k];
                    if (!m[k][j].is_zero()) {
                        for (size_t i = 0; i < N; ++i) std::swap(m[i][j], m[i][k]);
                        again = true;
                    }
                }
        }
        // enforce divisibility of the remaining block; on failure fold the
        // offending row into row k and redo the pivot
        bool redo = false;
        for (size_t i = k + 1; i < N && !redo; ++i)
            for (size_t j = k + 1; j < N && !redo; ++j)
                if (!divides(m[k][k], m[i][j])) {
                    for (size_t t = k; t < N; ++t) m[k][t] += m[i][t];
                    redo = true;
                }
        if (redo) continue;
        div[k] = unit_normalize(m[k][k]);
        ++k;
    }
    return div;
}

}  // namespace caplift
