#pragma once

// The graded ring of modular forms on Gamma_0(4) with character powers of
// chi_-4, generated by theta^2 (weight 1, chi_-4) and F (weight 2, trivial).
// Odd-weight pieces M_m(4, chi_-4) are spanned by the monomials
// theta^(2a) F^b with a + 2b = m; the cusp subspace is cut out by the
// constant terms at the cusps infinity and 0 (the cusp 1/2 condition is
// automatic in odd weight and asserted).

#include <map>
#include <mutex>
#include <vector>

#include "qexp.hpp"

namespace caplift {

using ZSeries = std::vector<Int>;  // integer q-expansion, index = exponent

namespace series {

inline ZSeries mul(const ZSeries& a, const ZSeries& b, size_t trunc) {
    ZSeries r(trunc + 1, 0);
    for (size_t i = 0; i < a.size() && i <= trunc; ++i) {
        if (a[i] == 0) continue;
        size_t jmax = std::min(b.size() - 1, trunc - i);
        for (size_t j = 0; j <= jmax; ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    return r;
}

// r_2(n) = #{(x,y) : x^2+y^2 = n} = 4 sum_{d|n} chi_-4(d)
inline ZSeries theta2(size_t trunc) {
    ZSeries r(trunc + 1, 0);
    r[0] = 1;
    long lim = static_cast<long>(std::sqrt(static_cast<double>(trunc))) + 1;
    for (long x = -lim; x <= lim; ++x)
        for (long y = -lim; y <= lim; ++y) {
            long n = x * x + y * y;
            if (n >= 1 && n <= static_cast<long>(trunc)) r[n] += 1;
        }
    return r;
}

// F = sum_{n odd} sigma_1(n) q^n
inline ZSeries f2(size_t trunc) {
    ZSeries r(trunc + 1, 0);
    for (size_t d = 1; d <= trunc; ++d)
        for (size_t n = d; n <= trunc; n += 2 * d)
            if ((n / d) % 2 == 1 && n % 2 == 1) r[n] += d;
    return r;
}

}  // namespace series

// sigma_1 with sigma_1(non-integer) = 0 convention baked in by callers
inline Int sigma1(long n) {
    Int s = 0;
    for (long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            s += d;
            if (d != n / d) s += n / d;
        }
    return s;
}

struct Monomial {
    int a;  // exponent of theta^2
    int b;  // exponent of F
};

inline std::vector<Monomial> monomials(int m) {
    // a + 2b = m, a >= 1 for odd m
    std::vector<Monomial> out;
    for (int b = 0; 2 * b < m; ++b) out.push_back({m - 2 * b, b});
    return out;
}

// Cohen-Oesterle dimension of S_m(Gamma_0(4), chi_-4), odd m >= 3.
// Independent of the basis pipeline; used as the oracle.
inline long dim_cusp_oracle(int m) {
    if (m < 3 || m % 2 == 0) throw std::domain_error("dim_cusp_oracle: odd m >= 3 required");
    // index term: (m-1)/12 * [SL2(Z):Gamma_0(4)]
    long term1 = (m - 1) * 6 / 12;
    // elliptic terms: solutions of x^2+1 = 0 and x^2+x+1 = 0 mod 4 (none)
    long e2 = 0, e3 = 0;
    for (long x = 0; x < 4; ++x) {
        if ((x * x + 1) % 4 == 0) ++e2;
        if ((x * x + x + 1) % 4 == 0) ++e3;
    }
    if (e2 != 0 || e3 != 0) throw std::logic_error("dim_cusp_oracle: unexpected elliptic points");
    // cusp term: half the product over p | N of lambda(r_p, s_p, p); here only
    // p = 2 with r = ord_2(4) = 2, s = ord_2(cond chi_-4) = 2, and 2s > r
    // gives lambda = 2 * 2^(r-s) = 2
    long r = 2, s = 2, lambda;
    if (2 * s <= r)
        lambda = (r % 2 == 0) ? (1L << (r / 2)) + (1L << (r / 2 - 1)) : 2L << ((r - 1) / 2);
    else
        lambda = 2L * (1L << (r - s));
    return term1 - lambda / 2;
}

// Sturm bound for weight m, level 4: ceil(m * [SL2:Gamma_0(4)] / 12)
inline long sturm_bound(int m) { return (m * 6 + 11) / 12; }

// ---------------------------------------------------------------------------
// Basis machinery.  Everything is cached per (weight, trunc) because the
// integer series products dominate the runtime at large truncation.

struct SpaceBasis {
    int weight = 0;
    long trunc = 0;
    std::vector<Monomial> mono;
    std::vector<ZSeries> mono_series;       // q-expansions of the monomials
    std::vector<std::vector<Rat>> cusp;     // cusp basis rows: coords in monomials
    std::vector<QExpansion> cusp_series;    // echelonized exact cusp expansions
};

namespace detail {

// constant terms of the monomial slash-expansions at cusp 0:
// theta^2|S has constant -i/2, F|S has constant -1/64; the product constant
// for theta^(2a) F^b is (-i/2)^a (-1/64)^b.  For odd a this is -i * (+-1) *
// 2^-a (-1/64)^b, so the cusp-0 condition is a single rational equation.
inline Rat cusp0_constant_real_part(const Monomial& mo) {
    // (-i)^a = -i * (-1)^((a-1)/2) for odd a; return the rational factor
    int sign = ((mo.a - 1) / 2) % 2 == 0 ? 1 : -1;
    Rat v(sign, 1);
    v /= Rat(Int(1) << mo.a);
    Rat c(1);
    for (int j = 0; j < mo.b; ++j) c *= Rat(-1, 64);
    return v * c;
}

}  // namespace detail

inline const SpaceBasis& space_basis_cached(int m, long trunc);

// Full odd-weight space M_m(4, chi_-4) as exact monomial expansions.
inline std::vector<QExpansion> space_basis(int m, long trunc) {
    if (m < 1 || m % 2 == 0) throw std::domain_error("space_basis: odd m >= 1 required");
    const auto& sb = space_basis_cached(m, trunc);
    std::vector<QExpansion> out;
    FieldId q = rational_field();
    for (const auto& s : sb.mono_series) {
        QExpansion f = QExpansion::zero(m, CharFlag::chi_m4, trunc, q);
        for (long n = 0; n <= trunc; ++n) f.a(n) = NFElem::make_rational(q, Rat(s[n]));
        out.push_back(std::move(f));
    }
    return out;
}

// Echelonized exact basis of S_m(4, chi_-4); dimension must match the
// Cohen-Oesterle oracle.  Throws insufficient-precision below the Sturm
// bound.
inline std::vector<QExpansion> cusp_basis(int m, long trunc) {
    if (m < 3 || m % 2 == 0) throw std::domain_error("cusp_basis: odd m >= 3 required");
    if (trunc < sturm_bound(m))
        throw std::domain_error("cusp_basis: truncation below the Sturm bound");
    const auto& sb = space_basis_cached(m, trunc);
    return sb.cusp_series;
}

inline const SpaceBasis& space_basis_cached(int m, long trunc) {
    static std::mutex mu;
    static std::map<std::pair<int, long>, std::unique_ptr<SpaceBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, trunc);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto sb = std::make_unique<SpaceBasis>();
    sb->weight = m;
    sb->trunc = trunc;
    sb->mono = monomials(m);

    // powers of theta^2 and F, built once
    size_t t = static_cast<size_t>(trunc);
    ZSeries th = series::theta2(t);
    ZSeries ff = series::f2(t);
    int amax = m, bmax = (m - 1) / 2;
    std::vector<ZSeries> thpow(amax + 1), fpow(bmax + 1);
    thpow[0] = ZSeries(t + 1, 0);
    thpow[0][0] = 1;
    for (int a = 1; a <= amax; ++a) thpow[a] = series::mul(thpow[a - 1], th, t);
    fpow[0] = thpow[0];
    for (int b = 1; b <= bmax; ++b) fpow[b] = series::mul(fpow[b - 1], ff, t);
    for (const auto& mo : sb->mono)
        sb->mono_series.push_back(series::mul(thpow[mo.a], fpow[mo.b], t));

    if (m >= 3) {
        // cusp conditions: a(0) = 0 at infinity and the cusp-0 constant term
        size_t k = sb->mono.size();
        std::vector<std::vector<Rat>> rows;  // conditions as rows over monomial coords
        {
            std::vector<Rat> inf(k), zero_cusp(k);
            for (size_t j = 0; j < k; ++j) {
                inf[j] = Rat(sb->mono_series[j][0]);
                zero_cusp[j] = detail::cusp0_constant_real_part(sb->mono[j]);
            }
            rows.push_back(inf);
            rows.push_back(zero_cusp);
        }
        // kernel of the 2 x k condition matrix
        std::vector<std::vector<Rat>> mat = rows;
        std::vector<int> pivot_col;
        size_t rrank = 0;
        for (size_t col = 0; col < k && rrank < mat.size(); ++col) {
            size_t piv = rrank;
            while (piv < mat.size() && mat[piv][col] == 0) ++piv;
            if (piv == mat.size()) continue;
            std::swap(mat[piv], mat[rrank]);
            Rat inv = 1 / mat[rrank][col];
            for (auto& x : mat[rrank]) x *= inv;
            for (size_t rr = 0; rr < mat.size(); ++rr) {
                if (rr == rrank || mat[rr][col] == 0) continue;
                Rat f = mat[rr][col];
                for (size_t cc = 0; cc < k; ++cc) mat[rr][cc] -= f * mat[rrank][cc];
            }
            pivot_col.push_back(static_cast<int>(col));
            ++rrank;
        }
        std::vector<std::vector<Rat>> kernel;
        for (size_t freecol = 0; freecol < k; ++freecol) {
            bool is_pivot = false;
            for (int pc : pivot_col) is_pivot |= (pc == static_cast<int>(freecol));
            if (is_pivot) continue;
            std::vector<Rat> v(k, Rat(0));
            v[freecol] = 1;
            for (size_t rr = 0; rr < rrank; ++rr)
                v[static_cast<size_t>(pivot_col[rr])] = -mat[rr][freecol];
            kernel.push_back(std::move(v));
        }
        long dim_expected = dim_cusp_oracle(m);
        if (static_cast<long>(kernel.size()) != dim_expected)
            throw std::logic_error("cusp_basis: dimension disagrees with the oracle");
        // assemble expansions and echelonize by q-expansion coefficients
        FieldId qf = rational_field();
        std::vector<QExpansion> exps;
        for (const auto& v : kernel) {
            QExpansion e = QExpansion::zero(m, CharFlag::chi_m4, trunc, qf);
            for (size_t j = 0; j < k; ++j) {
                if (v[j] == 0) continue;
                for (long n = 0; n <= trunc; ++n)
                    e.a(n).c[0] += v[j] * Rat(sb->mono_series[j][static_cast<size_t>(n)]);
            }
            if (!e.a(0).is_zero()) throw std::logic_error("cusp_basis: nonzero constant term");
            exps.push_back(std::move(e));
        }
        // echelonize on coefficients 1..trunc
        size_t rank = 0;
        for (long col = 1; col <= trunc && rank < exps.size(); ++col) {
            size_t piv = rank;
            while (piv < exps.size() && exps[piv].a(col).is_zero()) ++piv;
            if (piv == exps.size()) continue;
            std::swap(exps[piv], exps[rank]);
            NFElem inv = exps[rank].a(col).inverse();
            exps[rank] = exps[rank].scaled(inv);
            for (size_t rr = 0; rr < exps.size(); ++rr) {
                if (rr == rank || exps[rr].a(col).is_zero()) continue;
                NFElem f = exps[rr].a(col);
                exps[rr] = exps[rr] - exps[rank].scaled(f);
            }
            ++rank;
        }
        if (rank != exps.size()) throw std::logic_error("cusp_basis: dependent kernel vectors");
        sb->cusp_series = std::move(exps);
        for (const auto& v : kernel) sb->cusp.push_back(v);
    }

    auto& ref = *sb;
    cache[key] = std::move(sb);
    return ref;
}

// exact rank of the monomial coefficient matrix (validation of linear
// independence of the generators' monomials)
inline long monomial_rank(int m, long trunc) {
    const auto& sb = space_basis_cached(m, trunc);
    std::vector<std::vector<Rat>> rows;
    for (const auto& s : sb.mono_series) {
        std::vector<Rat> r(s.size());
        for (size_t i = 0; i < s.size(); ++i) r[i] = Rat(s[i]);
        rows.push_back(std::move(r));
    }
    size_t rank = 0;
    size_t cols = rows.empty() ? 0 : rows[0].size();
    for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
        size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        Rat inv = 1 / rows[rank][col];
        for (auto& x : rows[rank]) x *= inv;
        for (size_t rr = rank + 1; rr < rows.size(); ++rr) {
            if (rows[rr][col] == 0) continue;
            Rat f = rows[rr][col];
            for (size_t cc = col; cc < cols; ++cc) rows[rr][cc] -= f * rows[rank][cc];
        }
        ++rank;
    }
    return static_cast<long>(rank);
}

// generator expansions in the public QExpansion format
inline QExpansion generator_theta2(long trunc) {
    FieldId q = rational_field();
    QExpansion f = QExpansion::zero(1, CharFlag::chi_m4, trunc, q);
    ZSeries s = series::theta2(static_cast<size_t>(trunc));
    for (long n = 0; n <= trunc; ++n) f.a(n) = NFElem::make_rational(q, Rat(s[n]));
    return f;
}

inline QExpansion generator_F2(long trunc) {
    FieldId q = rational_field();
    QExpansion f = QExpansion::zero(2, CharFlag::trivial, trunc, q);
    ZSeries s = series::f2(static_cast<size_t>(trunc));
    for (long n = 0; n <= trunc; ++n) f.a(n) = NFElem::make_rational(q, Rat(s[n]));
    return f;
}

}  // namespace caplift
