#pragma once

// Polynomial arithmetic and factorization over F_ell and F_{ell^m}
// (ell an odd prime).  Degrees here are tiny, so everything is the
// plain quadratic-time textbook version.

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gauss.hpp"

namespace caplift {

// coefficients low-degree-first, reduced into [0, p)
using FpPoly = std::vector<Int>;

struct FpCtx {
    Int p;

    Int reduce(const Int& a) const {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int add(const Int& a, const Int& b) const { return reduce(a + b); }
    Int sub(const Int& a, const Int& b) const { return reduce(a - b); }
    Int mul(const Int& a, const Int& b) const { return reduce(a * b); }
    Int inv(const Int& a) const {
        Int r;
        if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()))
            throw std::domain_error("FpCtx::inv: not invertible");
        return r;
    }
    Int pow(Int a, Int e) const {
        Int r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
};

inline void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int fp_deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline FpPoly fp_reduce(const FpCtx& F, FpPoly f) {
    for (auto& c : f) c = F.reduce(c);
    fp_trim(f);
    return f;
}

inline FpPoly fp_add(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
        r[i] = F.reduce(r[i]);
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_sub(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        Int x = i < a.size() ? a[i] : Int(0);
        Int y = i < b.size() ? b[i] : Int(0);
        r[i] = F.sub(x, y);
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_mul(const FpCtx& F, const FpPoly& a, const FpPoly& b) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return fp_reduce(F, std::move(r));
}

inline FpPoly fp_scale(const FpCtx& F, const FpPoly& a, const Int& c) {
    FpPoly r = a;
    for (auto& x : r) x = F.mul(x, c);
    fp_trim(r);
    return r;
}

// division with remainder; divisor must be nonzero
inline std::pair<FpPoly, FpPoly> fp_divmod(const FpCtx& F, FpPoly a, const FpPoly& b) {
    if (b.empty()) throw std::domain_error("fp_divmod: division by zero");
    Int linv = F.inv(b.back());
    FpPoly q;
    while (fp_deg(a) >= fp_deg(b)) {
        int shift = fp_deg(a) - fp_deg(b);
        Int c = F.mul(a.back(), linv);
        if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] = F.sub(a[i + shift], F.mul(c, b[i]));
        fp_trim(a);
    }
    return {std::move(q), std::move(a)};
}

inline FpPoly fp_mod(const FpCtx& F, FpPoly a, const FpPoly& b) {
    return fp_divmod(F, std::move(a), b).second;
}

inline FpPoly fp_gcd(const FpCtx& F, FpPoly a, FpPoly b) {
    while (!b.empty()) {
        FpPoly r = fp_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = fp_scale(F, a, F.inv(a.back()));  // monic
    return a;
}

inline FpPoly fp_powmod(const FpCtx& F, FpPoly base, Int e, const FpPoly& m) {
    FpPoly r{Int(1)};
    base = fp_mod(F, std::move(base), m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp_mod(F, fp_mul(F, r, base), m);
        base = fp_mod(F, fp_mul(F, base, base), m);
        e >>= 1;
    }
    return r;
}

inline FpPoly fp_derivative(const FpCtx& F, const FpPoly& a) {
    FpPoly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(F.reduce(Int(i) * a[i]));
    fp_trim(r);
    return r;
}

// Distinct-degree then Cantor-Zassenhaus equal-degree splitting.
// Input must be squarefree; output monic irreducible factors, sorted.
inline std::vector<FpPoly> fp_factor_squarefree(const FpCtx& F, FpPoly f,
                                                std::mt19937_64& rng) {
    std::vector<FpPoly> out;
    f = fp_scale(F, f, F.inv(f.back()));
    std::vector<std::pair<FpPoly, int>> stage;  // (product of deg-d factors, d)
    FpPoly x{Int(0), Int(1)};
    FpPoly h = x;
    FpPoly rest = f;
    for (int d = 1; fp_deg(rest) >= 2 * d; ++d) {
        h = fp_powmod(F, h, F.p, rest);
        FpPoly g = fp_gcd(F, fp_sub(F, h, x), rest);
        if (fp_deg(g) > 0) {
            stage.push_back({g, d});
            rest = fp_divmod(F, rest, g).first;
            h = fp_mod(F, h, rest);
        }
    }
    if (fp_deg(rest) > 0) stage.push_back({rest, fp_deg(rest)});

    std::uniform_int_distribution<long> coef(0, 1 << 30);
    for (auto& [prod, d] : stage) {
        std::vector<FpPoly> work{prod};
        while (!work.empty()) {
            FpPoly g = work.back();
            work.pop_back();
            if (fp_deg(g) == d) { out.push_back(g); continue; }
            // random splitting: gcd(g, r^((p^d-1)/2) - 1)
            for (;;) {
                FpPoly r(fp_deg(g), 0);
                for (auto& c : r) c = F.reduce(Int(coef(rng)));
                r.push_back(Int(1));
                Int e = 1;
                for (int i = 0; i < d; ++i) e *= F.p;
                e = (e - 1) / 2;
                FpPoly s = fp_powmod(F, r, e, g);
                if (s.empty()) continue;
                s[0] = F.sub(s[0], Int(1));
                fp_trim(s);
                FpPoly c = fp_gcd(F, s, g);
                if (fp_deg(c) > 0 && fp_deg(c) < fp_deg(g)) {
                    work.push_back(c);
                    work.push_back(fp_divmod(F, g, c).first);
                    break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Full factorization of a nonzero polynomial mod ell (odd prime).
// Returns monic irreducible factors with multiplicity.  Requires
// ell > deg f so the derivative of a nonconstant factor never vanishes.
inline std::vector<std::pair<FpPoly, int>> fp_factor(const FpCtx& F, FpPoly f) {
    std::mt19937_64 rng(0x5eedULL);  // deterministic runs
    std::vector<std::pair<FpPoly, int>> out;
    f = fp_reduce(F, std::move(f));
    if (fp_deg(f) < 1) return out;
    f = fp_scale(F, f, F.inv(f.back()));
    FpPoly d = fp_derivative(F, f);
    if (d.empty()) throw std::domain_error("fp_factor: inseparable input");
    FpPoly sqfree = fp_divmod(F, f, fp_gcd(F, f, d)).first;
    for (auto& irr : fp_factor_squarefree(F, sqfree, rng)) {
        int m = 0;
        for (;;) {
            auto [q, rem] = fp_divmod(F, f, irr);
            if (!rem.empty()) break;
            ++m;
            f = q;
        }
        out.push_back({irr, m});
    }
    if (fp_deg(f) > 0) throw std::logic_error("fp_factor: leftover factor");
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// F_q = F_ell[x]/(u), u irreducible.

struct FqCtx {
    FpCtx F;
    FpPoly u;  // monic irreducible

    int degree() const { return fp_deg(u); }
    Int q() const {
        Int r = 1;
        for (int i = 0; i < degree(); ++i) r *= F.p;
        return r;
    }
};

using FqElem = FpPoly;  // reduced mod u

inline FqElem fq_make(const FqCtx& Q, FpPoly a) { return fp_mod(Q.F, fp_reduce(Q.F, std::move(a)), Q.u); }
inline FqElem fq_add(const FqCtx& Q, const FqElem& a, const FqElem& b) { return fp_add(Q.F, a, b); }
inline FqElem fq_sub(const FqCtx& Q, const FqElem& a, const FqElem& b) { return fp_sub(Q.F, a, b); }
inline FqElem fq_mul(const FqCtx& Q, const FqElem& a, const FqElem& b) {
    return fp_mod(Q.F, fp_mul(Q.F, a, b), Q.u);
}
inline FqElem fq_pow(const FqCtx& Q, const FqElem& a, const Int& e) {
    return fp_powmod(Q.F, a, e, Q.u);
}
inline FqElem fq_inv(const FqCtx& Q, const FqElem& a) {
    if (a.empty()) throw std::domain_error("fq_inv: zero");
    return fq_pow(Q, a, Q.q() - 2);
}

// Roots in F_q of a polynomial with F_q coefficients (low-first vector of
// FqElem), by exhaustive gcd-free evaluation via CZ-style splitting; here we
// only ever need small degrees, so evaluate-and-refine is replaced by
// straightforward root extraction from gcd(f, X^q - X).
inline std::vector<FqElem> fq_roots(const FqCtx& Q, std::vector<FqElem> f,
                                    std::mt19937_64& rng) {
    // polynomial arithmetic over F_q, ad hoc
    auto trim = [](std::vector<FqElem>& v) { while (!v.empty() && v.back().empty()) v.pop_back(); };
    auto scale = [&](std::vector<FqElem> v, const FqElem& c) {
        for (auto& e : v) e = fq_mul(Q, e, c);
        return v;
    };
    auto mod = [&](std::vector<FqElem> a, const std::vector<FqElem>& b) {
        FqElem linv = fq_inv(Q, b.back());
        while (a.size() >= b.size() && !a.empty()) {
            FqElem c = fq_mul(Q, a.back(), linv);
            size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[i + shift] = fq_sub(Q, a[i + shift], fq_mul(Q, c, b[i]));
            trim(a);
        }
        return a;
    };
    std::function<std::vector<FqElem>(std::vector<FqElem>, std::vector<FqElem>)> gcd =
        [&](std::vector<FqElem> a, std::vector<FqElem> b) {
            while (!b.empty()) {
                auto r = mod(a, b);
                a = std::move(b);
                b = std::move(r);
            }
            if (!a.empty()) a = scale(a, fq_inv(Q, a.back()));
            return a;
        };
    auto mulmod = [&](std::vector<FqElem> a, const std::vector<FqElem>& b,
                      const std::vector<FqElem>& m) {
        std::vector<FqElem> r(a.size() + b.size() - 1);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                r[i + j] = fq_add(Q, r[i + j], fq_mul(Q, a[i], b[j]));
        trim(r);
        return mod(std::move(r), m);
    };
    auto powmod = [&](std::vector<FqElem> base, Int e, const std::vector<FqElem>& m) {
        std::vector<FqElem> r{FqElem{Int(1)}};
        base = mod(std::move(base), m);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, base, m);
            base = mulmod(base, base, m);
            e >>= 1;
        }
        return r;
    };

    trim(f);
    if (f.size() <= 1) return {};
    // keep only the part splitting into linear factors: gcd(f, X^q - X)
    std::vector<FqElem> X{FqElem{}, FqElem{Int(1)}};
    auto xq = powmod(X, Q.q(), f);
    // xq - X
    std::vector<FqElem> diff = xq;
    if (diff.size() < 2) diff.resize(2);
    diff[1] = fq_sub(Q, diff[1], FqElem{Int(1)});
    trim(diff);
    auto lin = gcd(f, diff);
    std::vector<FqElem> roots;
    std::uniform_int_distribution<long> coef(0, 1 << 30);
    std::function<void(std::vector<FqElem>)> split = [&](std::vector<FqElem> g) {
        trim(g);
        if (g.size() <= 1) return;
        if (g.size() == 2) {
            // root = -g0/g1
            FqElem r = fq_mul(Q, g[0], fq_inv(Q, g[1]));
            for (auto& c : r) c = Q.F.sub(Int(0), c);
            roots.push_back(fq_make(Q, r));
            return;
        }
        for (;;) {
            // random shift b: gcd(g(X), (X+b)^((q-1)/2) - 1)
            FqElem b(Q.degree());
            for (auto& c : b) c = Q.F.reduce(Int(coef(rng)));
            fp_trim(b);
            std::vector<FqElem> shifted{b, FqElem{Int(1)}};
            auto s = powmod(shifted, (Q.q() - 1) / 2, g);
            if (s.empty()) continue;
            if (s.size() < 1) s.resize(1);
            s[0] = fq_sub(Q, s[0], FqElem{Int(1)});
            trim(s);
            auto c = gcd(s, g);
            if (!c.empty() && c.size() > 1 && c.size() < g.size()) {
                auto rest = g;
                // rest = g / c
                {
                    FqElem linv = fq_inv(Q, c.back());
                    std::vector<FqElem> quo(rest.size() - c.size() + 1);
                    auto a = rest;
                    while (a.size() >= c.size() && !a.empty()) {
                        FqElem cc = fq_mul(Q, a.back(), linv);
                        size_t shift = a.size() - c.size();
                        quo[shift] = cc;
                        for (size_t i = 0; i < c.size(); ++i)
                            a[i + shift] = fq_sub(Q, a[i + shift], fq_mul(Q, cc, c[i]));
                        trim(a);
                    }
                    rest = std::move(quo);
                }
                split(c);
                split(rest);
                return;
            }
        }
    };
    if (lin.size() > 1) split(lin);
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Deterministic irreducible polynomial of degree m over F_ell: scan monic
// polynomials in a fixed order and test irreducibility.
inline FpPoly fp_find_irreducible(const FpCtx& F, int m) {
    if (m == 1) return FpPoly{Int(0), Int(1)};
    auto is_irreducible = [&](const FpPoly& f) {
        FpPoly x{Int(0), Int(1)};
        FpPoly h = x;
        Int p = F.p;
        for (int d = 1; d <= m / 2; ++d) {
            h = fp_powmod(F, h, p, f);
            FpPoly g = fp_gcd(F, fp_sub(F, h, x), f);
            if (fp_deg(g) > 0) return false;
        }
        return true;
    };
    for (Int counter = 0;; ++counter) {
        // encode counter in base ell as the low coefficients
        FpPoly f(m + 1, 0);
        f[m] = 1;
        Int c = counter;
        for (int i = 0; i < m && c > 0; ++i) {
            f[i] = F.reduce(c);
            c /= F.p;
        }
        f[0] = F.reduce(f[0] + 1);  // avoid x | f
        if (is_irreducible(f)) return f;
    }
}

}  // namespace caplift
