#pragma once

// Polynomials over Z and Q: arithmetic, gcd, Hensel lifting, factorization
// over Z (Zassenhaus with Mignotte bound), cyclotomic polynomials.
// Degrees stay small (<= 16) throughout the library.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fppoly.hpp"
#include "gauss.hpp"

namespace caplift {

using ZPoly = std::vector<Int>;  // low-degree first
using QPoly = std::vector<Rat>;

inline void z_trim(ZPoly& f) { while (!f.empty() && f.back() == 0) f.pop_back(); }
inline void q_trim(QPoly& f) { while (!f.empty() && f.back() == 0) f.pop_back(); }
inline int z_deg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }
inline int q_deg(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

inline QPoly to_qpoly(const ZPoly& f) {
    QPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = Rat(f[i]);
    return r;
}

inline ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    z_trim(r);
    return r;
}

inline QPoly q_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    q_trim(r);
    return r;
}

inline QPoly q_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    q_trim(r);
    return r;
}

inline QPoly q_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    q_trim(r);
    return r;
}

inline std::pair<QPoly, QPoly> q_divmod(QPoly a, const QPoly& b) {
    if (b.empty()) throw std::domain_error("q_divmod: division by zero");
    QPoly q;
    Rat linv = 1 / b.back();
    while (q_deg(a) >= q_deg(b)) {
        int shift = q_deg(a) - q_deg(b);
        Rat c = a.back() * linv;
        if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= c * b[i];
        q_trim(a);
    }
    return {std::move(q), std::move(a)};
}

inline QPoly q_gcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        QPoly r = q_divmod(std::move(a), b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat linv = 1 / a.back();
        for (auto& c : a) c *= linv;
    }
    return a;
}

inline Rat q_eval(const QPoly& f, const Rat& x) {
    Rat r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

inline QPoly q_derivative(const QPoly& f) {
    QPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(Rat(Int(i)) * f[i]);
    q_trim(r);
    return r;
}

inline bool q_squarefree(const QPoly& f) {
    if (q_deg(f) <= 1) return true;
    return q_deg(q_gcd(f, q_derivative(f))) == 0;
}

// clear denominators, divide by content, make leading coefficient positive
inline ZPoly primitive_part(const QPoly& f) {
    Int den = 1;
    for (const auto& c : f) {
        Int d = c.get_den();
        den = den / gcd_int(den, d) * d;
    }
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        Rat v = f[i] * Rat(den);
        r[i] = v.get_num();
    }
    Int cont = 0;
    for (const auto& c : r) cont = gcd_int(cont, abs(c));
    if (cont > 1)
        for (auto& c : r) c /= cont;
    if (!r.empty() && sgn(r.back()) < 0)
        for (auto& c : r) c = -c;
    return r;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomial Phi_M by repeated exact division of x^M - 1.

inline ZPoly cyclotomic(long M) {
    auto zdiv_exact = [](ZPoly a, const ZPoly& b) {
        ZPoly q;
        while (z_deg(a) >= z_deg(b)) {
            int shift = z_deg(a) - z_deg(b);
            if (a.back() % b.back() != 0) throw std::logic_error("cyclotomic: inexact division");
            Int c = a.back() / b.back();
            if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
            q[shift] = c;
            for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
            z_trim(a);
        }
        if (!a.empty()) throw std::logic_error("cyclotomic: nonzero remainder");
        return q;
    };
    ZPoly num(M + 1, 0);
    num[0] = -1;
    num[M] = 1;
    for (long d = 1; d < M; ++d)
        if (M % d == 0) num = zdiv_exact(std::move(num), cyclotomic(d));
    return num;
}

// ---------------------------------------------------------------------------
// Hensel lifting: given monic f in Z[x] and coprime monic factors g, h mod p
// with f = g h (mod p), lift to f = G H (mod p^target_exp).

struct HenselPair {
    ZPoly g, h;  // lifted factors, monic, coefficients reduced mod modulus
    Int modulus;
};

namespace detail {
inline ZPoly zmod_reduce(ZPoly f, const Int& m) {
    for (auto& c : f) {
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        if (c > m / 2) c -= m;  // symmetric residue
    }
    z_trim(f);
    return f;
}
inline ZPoly zmod_mul(const ZPoly& a, const ZPoly& b, const Int& m) {
    return zmod_reduce(z_mul(a, b), m);
}
inline ZPoly zmod_add(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    return zmod_reduce(std::move(r), m);
}
inline ZPoly zmod_sub(const ZPoly& a, const ZPoly& b, const Int& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    return zmod_reduce(std::move(r), m);
}
// division a = q b + r mod m, b monic
inline std::pair<ZPoly, ZPoly> zmod_divmod_monic(ZPoly a, const ZPoly& b, const Int& m) {
    ZPoly q;
    a = zmod_reduce(std::move(a), m);
    while (z_deg(a) >= z_deg(b)) {
        int shift = z_deg(a) - z_deg(b);
        Int c = a.back();
        if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a = zmod_reduce(std::move(a), m);
    }
    return {zmod_reduce(std::move(q), m), std::move(a)};
}
}  // namespace detail

inline HenselPair hensel_lift(const ZPoly& f, FpPoly g0, FpPoly h0, const Int& p,
                              int target_exp) {
    using namespace detail;
    if (f.back() != 1) throw std::domain_error("hensel_lift: f must be monic");
    // Bezout: s g0 + t h0 = 1 mod p
    FpCtx F{p};
    FpPoly s{}, t{};
    {
        // extended Euclid over F_p
        FpPoly r0 = g0, r1 = h0, s0{Int(1)}, s1{}, t0{}, t1{Int(1)};
        while (!r1.empty()) {
            auto [q, r2] = fp_divmod(F, r0, r1);
            auto comb = [&](const FpPoly& a0, const FpPoly& a1) {
                return fp_sub(F, a0, fp_mul(F, q, a1));
            };
            FpPoly s2 = comb(s0, s1), t2 = comb(t0, t1);
            r0 = std::move(r1); r1 = std::move(r2);
            s0 = std::move(s1); s1 = std::move(s2);
            t0 = std::move(t1); t1 = std::move(t2);
        }
        if (fp_deg(r0) != 0) throw std::domain_error("hensel_lift: factors not coprime");
        Int inv = F.inv(r0[0]);
        s = fp_scale(F, s0, inv);
        t = fp_scale(F, t0, inv);
    }
    // invariants: f = g h (mod m), s g + t h = 1 (mod m), g and h monic
    ZPoly g(g0.begin(), g0.end()), h(h0.begin(), h0.end());
    ZPoly S(s.begin(), s.end()), T(t.begin(), t.end());
    Int m = p;
    int e = 1;
    while (e < target_exp) {
        Int m2 = m * m;
        e *= 2;
        ZPoly err = zmod_sub(f, z_mul(g, h), m2);
        auto [q1, r1] = zmod_divmod_monic(zmod_mul(S, err, m2), h, m2);
        ZPoly gnew = zmod_add(g, zmod_add(zmod_mul(T, err, m2), zmod_mul(q1, g, m2), m2), m2);
        ZPoly hnew = zmod_add(h, r1, m2);
        g = std::move(gnew);
        h = std::move(hnew);
        ZPoly b = zmod_sub(zmod_add(z_mul(S, g), z_mul(T, h), m2), ZPoly{Int(1)}, m2);
        auto [c1, d1] = zmod_divmod_monic(zmod_mul(S, b, m2), h, m2);
        S = zmod_sub(S, d1, m2);
        T = zmod_sub(zmod_sub(T, zmod_mul(T, b, m2), m2), zmod_mul(c1, g, m2), m2);
        m = m2;
    }
    return {detail::zmod_reduce(std::move(g), m), detail::zmod_reduce(std::move(h), m), m};
}

// ---------------------------------------------------------------------------
// Factorization over Z (monic input), Zassenhaus style.  Returns monic
// irreducible factors, each with multiplicity 1 expected (we only call this
// on squarefree polynomials; multiplicities are handled by the caller).

inline std::vector<ZPoly> z_factor_squarefree_monic(const ZPoly& f) {
    if (z_deg(f) <= 0) return {};
    if (f.back() != 1) throw std::domain_error("z_factor: monic input required");
    if (z_deg(f) == 1) return {f};
    // Mignotte-style bound on factor coefficients: 2^n * (sum |a_i|^2)^(1/2)
    Int norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    Int bound = 1;
    mpz_sqrt(bound.get_mpz_t(), norm2.get_mpz_t());
    bound += 1;
    for (int i = 0; i <= z_deg(f) + 1; ++i) bound *= 2;

    // pick a prime keeping f squarefree mod p
    Int p = 101;
    FpCtx F{p};
    std::vector<std::pair<FpPoly, int>> fac;
    for (;;) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        F.p = p;
        FpPoly fp(f.begin(), f.end());
        fp = fp_reduce(F, std::move(fp));
        if (fp_deg(fp) != z_deg(f)) continue;
        FpPoly d = fp_derivative(F, fp);
        if (d.empty()) continue;
        if (fp_deg(fp_gcd(F, fp, d)) != 0) continue;
        fac = fp_factor(F, fp);
        break;
    }
    if (fac.size() == 1) return {f};  // irreducible mod p => irreducible

    // lift each factor against its cofactor to modulus > 2*bound
    int target = 1;
    Int pe = p;
    while (pe <= 2 * bound) { pe *= pe; target *= 2; }
    std::vector<ZPoly> lifted;
    Int modulus;
    {
        // iteratively split off the factors with hensel_lift
        ZPoly rest = f;
        std::vector<FpPoly> mods;
        for (auto& [g, m] : fac) mods.push_back(g);
        // single-factor peeling: lift (g, rest/g) pairs
        std::vector<FpPoly> pending(mods.begin(), mods.end());
        while (pending.size() > 1) {
            FpPoly g = pending.back();
            pending.pop_back();
            FpPoly h{Int(1)};
            for (auto& q : pending) h = fp_mul(F, h, q);
            HenselPair hp = hensel_lift(rest, g, h, p, target);
            modulus = hp.modulus;
            lifted.push_back(hp.g);
            rest = hp.h;  // continue splitting the cofactor (exact mod p^e)
        }
        lifted.push_back(rest);
    }

    // subset recombination
    std::vector<ZPoly> out;
    std::vector<int> alive(lifted.size(), 1);
    ZPoly rest = f;
    auto try_subset = [&](const std::vector<size_t>& idx) -> bool {
        ZPoly prod{Int(1)};
        for (size_t i : idx) prod = detail::zmod_mul(prod, lifted[i], modulus);
        // check true divisibility over Z
        QPoly q = to_qpoly(rest);
        auto [quo, rem] = q_divmod(q, to_qpoly(prod));
        if (!rem.empty()) return false;
        for (const auto& c : quo)
            if (c.get_den() != 1) return false;
        out.push_back(prod);
        ZPoly newrest(quo.size());
        for (size_t i = 0; i < quo.size(); ++i) newrest[i] = quo[i].get_num();
        rest = std::move(newrest);
        for (size_t i : idx) alive[i] = 0;
        return true;
    };
    for (size_t csize = 1; csize <= lifted.size(); ++csize) {
        bool progress = true;
        while (progress) {
            progress = false;
            // enumerate subsets of alive indices of size csize
            std::vector<size_t> pool;
            for (size_t i = 0; i < lifted.size(); ++i)
                if (alive[i]) pool.push_back(i);
            if (pool.size() < csize) break;
            std::vector<size_t> pick(csize);
            std::vector<size_t> stack;
            std::function<bool(size_t, size_t)> rec = [&](size_t start, size_t chosen) -> bool {
                if (chosen == csize) return try_subset(pick);
                for (size_t i = start; i < pool.size(); ++i) {
                    if (!alive[pool[i]]) continue;
                    pick[chosen] = pool[i];
                    if (rec(i + 1, chosen + 1)) return true;
                }
                return false;
            };
            if (rec(0, 0)) progress = true;
        }
    }
    if (z_deg(rest) > 0) out.push_back(rest);
    std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

// Factor a monic polynomial over Q into monic irreducible factors with
// multiplicities.  In characteristic zero the squarefree part carries every
// distinct irreducible factor, so one pass suffices.
inline std::vector<std::pair<QPoly, int>> q_factor_monic(const QPoly& f0) {
    const QPoly& f = f0;
    if (f.empty() || f.back() != 1) throw std::domain_error("q_factor_monic: monic input required");
    std::vector<std::pair<QPoly, int>> out;
    if (q_deg(f) == 0) return out;
    QPoly sq = q_divmod(f, q_gcd(f, q_derivative(f))).first;

    // substitute x = y/den to obtain an integral monic polynomial in y
    Int den = 1;
    for (const auto& c : sq) {
        Int d = c.get_den();
        den = den / gcd_int(den, d) * d;
    }
    size_t n = sq.size() - 1;
    ZPoly zs(sq.size());
    {
        Int pw = 1;
        for (size_t i = 0; i <= n; ++i) {
            Rat v = sq[n - i] * Rat(pw);
            if (v.get_den() != 1) throw std::logic_error("q_factor_monic: scaling failed");
            zs[n - i] = v.get_num();
            pw *= den;
        }
    }
    for (auto& zfac : z_factor_squarefree_monic(zs)) {
        QPoly qf(zfac.size());
        size_t m = zfac.size() - 1;
        Int pw = 1;
        for (size_t i = 0; i <= m; ++i) {
            qf[m - i] = Rat(zfac[m - i]) / Rat(pw);
            pw *= den;
        }
        Rat lead = qf.back();
        for (auto& c : qf) c /= lead;
        int mult = 0;
        QPoly t = f;
        for (;;) {
            auto [q, r] = q_divmod(t, qf);
            if (!r.empty()) break;
            ++mult;
            t = q;
        }
        if (mult == 0) throw std::logic_error("q_factor_monic: spurious factor");
        out.push_back({qf, mult});
    }
    size_t total = 0;
    for (auto& [qf, m] : out) total += static_cast<size_t>(q_deg(qf)) * m;
    if (total != static_cast<size_t>(q_deg(f)))
        throw std::logic_error("q_factor_monic: factor degrees do not add up");
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        for (size_t i = a.first.size(); i-- > 0;)
            if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
        return false;
    });
    return out;
}

}  // namespace caplift
