#pragma once

// Independent coset-side evaluation of the hermitian Hecke operators.
//
// Right cosets of Gamma_Z a Gamma_Z consist of block-triangular
// g = [[A, B], [0, D]] with A*D = mu I and D*B hermitian.  We enumerate all
// integral g of the given similitude from first principles (A in upper
// Hermite form over left-GL_2(O_K), B modulo the hermitian translation
// lattice {S D}), classify each g into its double coset by the elementary
// divisors of the 4x4 matrix over Z[i], and keep the class of the requested
// operator.  The slash sum is then evaluated with exact root-of-unity
// phases in a cyclotomic layer over the coefficient field.

#include <array>
#include <set>
#include <string>

#include "hecke_h.hpp"
#include "latticez.hpp"

namespace caplift {

struct CosetRep {
    Mat2K A, B, D;
};

struct CosetList {
    HeckeOpSpec op;
    Int mu;
    std::vector<CosetRep> reps;
};

namespace cosets_detail {

// unit-normalized Gaussian divisors of p^e
inline std::vector<GaussInt> gauss_divisors(long p, int e) {
    PrimeSplit s = split_prime(p);
    std::vector<GaussInt> out;
    if (s.kind == SplitKind::inert) {
        GaussInt cur(1);
        for (int j = 0; j <= e; ++j) {
            out.push_back(unit_normalize(cur));
            cur = cur * GaussInt(p);
        }
    } else if (s.kind == SplitKind::split) {
        for (int a = 0; a <= e; ++a)
            for (int b = 0; b <= e; ++b) {
                if (a + b > 2 * e) continue;
                GaussInt v(1);
                for (int j = 0; j < a; ++j) v = v * s.pi;
                for (int j = 0; j < b; ++j) v = v * s.pi.conj();
                // divisors of p^e: pi^a pibar^b with a,b <= e
                if (a <= e && b <= e) out.push_back(unit_normalize(v));
            }
    } else {
        GaussInt cur(1);
        for (int j = 0; j <= 2 * e; ++j) {
            out.push_back(unit_normalize(cur));
            cur = cur * s.pi;
        }
    }
    // dedupe
    std::sort(out.begin(), out.end(),
              [](const GaussInt& x, const GaussInt& y) { return x < y; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// canonical representatives of O_K / (d)
inline std::vector<GaussInt> residues_mod(const GaussInt& d) {
    std::vector<GaussInt> out;
    long n = d.norm().get_si();
    if (n == 1) return {GaussInt(0)};
    std::vector<GaussInt> seen;
    for (long x = 0; x < n; ++x)
        for (long y = 0; y < n; ++y) {
            GaussInt v(x, y);
            GaussInt r = v - round_div(v, d) * d;
            bool dup = false;
            for (auto& s : seen)
                if (divides(d, r - s)) { dup = true; break; }
            if (!dup) {
                seen.push_back(r);
                out.push_back(r);
                if (static_cast<long>(out.size()) == n) return out;
            }
        }
    return out;
}

inline GaussInt kelem_gauss(const KElem& v) {
    if (!v.is_integral()) throw std::logic_error("kelem_gauss: not integral");
    return v.num;
}

// elementary divisor multiset of the 4x4 block matrix over Z[i]
inline std::array<GaussInt, 4> ed_type(const CosetRep& r) {
    std::array<std::array<GaussInt, 4>, 4> m;
    auto put = [&](size_t i, size_t j, const KElem& v) { m[i][j] = kelem_gauss(v); };
    put(0, 0, r.A.a); put(0, 1, r.A.b); put(1, 0, r.A.c); put(1, 1, r.A.d);
    put(0, 2, r.B.a); put(0, 3, r.B.b); put(1, 2, r.B.c); put(1, 3, r.B.d);
    put(2, 0, KElem(0)); put(2, 1, KElem(0)); put(3, 0, KElem(0)); put(3, 1, KElem(0));
    put(2, 2, r.D.a); put(2, 3, r.D.b); put(3, 2, r.D.c); put(3, 3, r.D.d);
    return smith_divisors<4>(m);
}

inline bool same_type(const std::array<GaussInt, 4>& a, std::array<GaussInt, 4> b) {
    std::array<GaussInt, 4> x = a;
    auto lt = [](const GaussInt& u, const GaussInt& v) {
        if (u.norm() != v.norm()) return u.norm() < v.norm();
        return u < v;
    };
    std::sort(x.begin(), x.end(), lt);
    std::sort(b.begin(), b.end(), lt);
    for (int i = 0; i < 4; ++i)
        if (!(x[i] == b[i])) return false;
    return true;
}

inline std::array<GaussInt, 4> target_type(const HeckeOpSpec& op) {
    GaussInt one(1), p(op.p);
    switch (op.kind) {
        case HeckeKind::Tp_inert:
        case HeckeKind::Tp_split:
            return {one, one, unit_normalize(p), unit_normalize(p)};
        case HeckeKind::Tpi_split: {
            GaussInt pi = unit_normalize(op.pi);
            return {one, pi, pi, unit_normalize(p)};
        }
        case HeckeKind::T1p_inert:
            return {one, unit_normalize(p), unit_normalize(p), unit_normalize(p * p)};
    }
    throw std::logic_error("target_type");
}

// 8 integer coordinates of a 2x2 Gaussian matrix
inline std::array<Int, 8> coords_of(const Mat2K& m) {
    auto g = [&](const KElem& v) { return kelem_gauss(v); };
    return {g(m.a).re, g(m.a).im, g(m.b).re, g(m.b).im,
            g(m.c).re, g(m.c).im, g(m.d).re, g(m.d).im};
}

inline Mat2K matrix_of(const std::array<Int, 8>& x) {
    return mat2k(GaussInt(x[0], x[1]), GaussInt(x[2], x[3]),
                 GaussInt(x[4], x[5]), GaussInt(x[6], x[7]));
}

// exact inverse of a unimodular integer matrix
inline ZMat unimodular_inverse(const ZMat& u) {
    size_t n = u.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = Rat(u[i][j]);
        a[i][n + i] = 1;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::logic_error("unimodular_inverse: singular");
        std::swap(a[piv], a[col]);
        Rat inv = 1 / a[col][col];
        for (auto& x : a[col]) x *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (size_t c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    ZMat out(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (a[i][n + j].get_den() != 1) throw std::logic_error("unimodular_inverse: not integral");
            out[i][j] = a[i][n + j].get_num();
        }
    return out;
}

}  // namespace cosets_detail

// ---------------------------------------------------------------------------
// Exact double-coset membership by orbit closure.  The left coset Gamma g of
// g in Delta is completely determined by the row-span O_K-lattice of g:
// Gamma g = Gamma g' iff g' g^{-1} is integral with similitude 1, which for
// equal row spans is automatic from the similitude relation.  The canonical
// invariant is the row-Hermite form of the 4x4 matrix over Z[i], and the
// right cosets of Gamma a Gamma are exactly the right-multiplication orbit
// of Gamma a under generators of Gamma_Z.

namespace cosets_detail {

using GMat4 = std::array<std::array<GaussInt, 4>, 4>;

// canonical row-Hermite form over Z[i] (upper triangular, unit-normalized
// pivots, entries above a pivot reduced by rounded division)
inline GMat4 hnf4(GMat4 m) {
    size_t r = 0;
    for (size_t c = 0; c < 4 && r < 4; ++c) {
        // Euclidean elimination below the pivot
        for (;;) {
            size_t piv = 4;
            Int best;
            for (size_t i = r; i < 4; ++i)
                if (!m[i][c].is_zero() && (piv == 4 || m[i][c].norm() < best)) {
                    piv = i;
                    best = m[i][c].norm();
                }
            if (piv == 4) break;
            std::swap(m[piv], m[r]);
            bool clean = true;
            for (size_t i = r + 1; i < 4; ++i) {
                if (m[i][c].is_zero()) continue;
                GaussInt q = round_div(m[i][c], m[r][c]);
                for (size_t j = 0; j < 4; ++j) m[i][j] -= q * m[r][j];
                if (!m[i][c].is_zero()) clean = false;
            }
            if (clean) break;
        }
        if (m[r][c].is_zero()) continue;
        // normalize pivot by a unit
        GaussInt piv = m[r][c];
        GaussInt norm = unit_normalize(piv);
        // find the unit u with piv * u = norm
        for (GaussInt u : {GaussInt(1, 0), GaussInt(-1, 0), GaussInt(0, 1), GaussInt(0, -1)})
            if (piv * u == norm) {
                for (size_t j = 0; j < 4; ++j) m[r][j] = m[r][j] * u;
                break;
            }
        // reduce the rows above
        for (size_t i = 0; i < r; ++i) {
            GaussInt q = round_div(m[i][c], m[r][c]);
            if (q.is_zero()) continue;
            for (size_t j = 0; j < 4; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    return m;
}

inline GMat4 to_gmat(const CosetRep& rep) {
    GMat4 m;
    auto g = [&](const KElem& v) { return kelem_gauss(v); };
    m[0] = {g(rep.A.a), g(rep.A.b), g(rep.B.a), g(rep.B.b)};
    m[1] = {g(rep.A.c), g(rep.A.d), g(rep.B.c), g(rep.B.d)};
    m[2] = {GaussInt(0), GaussInt(0), g(rep.D.a), g(rep.D.b)};
    m[3] = {GaussInt(0), GaussInt(0), g(rep.D.c), g(rep.D.d)};
    return m;
}

inline std::string gmat_key(const GMat4& m) {
    std::string s;
    for (auto& row : m)
        for (auto& e : row) s += e.str() + ";";
    return s;
}

inline GMat4 gmat_mul(const GMat4& a, const GMat4& b) {
    GMat4 r;
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            GaussInt acc(0);
            for (size_t t = 0; t < 4; ++t) acc += a[i][t] * b[t][j];
            r[i][j] = acc;
        }
    return r;
}

// generators of Gamma_Z (and their inverses): the symplectic-style
// inversion, hermitian translations, and GL_2(Z[i]) rotations
inline const std::vector<GMat4>& gamma_generators() {
    static std::vector<GMat4> gens = [] {
        std::vector<GMat4> out;
        auto put = [&](std::array<std::array<long, 4>, 4> re,
                       std::array<std::array<long, 4>, 4> im) {
            GMat4 m;
            for (size_t i = 0; i < 4; ++i)
                for (size_t j = 0; j < 4; ++j) m[i][j] = GaussInt(re[i][j], im[i][j]);
            out.push_back(m);
        };
        std::array<std::array<long, 4>, 4> z{};
        // J and J^-1
        put({{{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}}}, z);
        put({{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}}, z);
        // translations by the hermitian generators, both signs
        auto trans = [&](long s11, long s22, long re12, long im12, int sign) {
            std::array<std::array<long, 4>, 4> re{
                {{1, 0, sign * s11, sign * re12},
                 {0, 1, sign * re12, sign * s22},
                 {0, 0, 1, 0},
                 {0, 0, 0, 1}}};
            std::array<std::array<long, 4>, 4> im{};
            im[0][3] = sign * im12;
            im[1][2] = -sign * im12;
            put(re, im);
        };
        for (int sign : {1, -1}) {
            trans(1, 0, 0, 0, sign);
            trans(0, 1, 0, 0, sign);
            trans(0, 0, 1, 0, sign);
            trans(0, 0, 0, 1, sign);
        }
        // rotations [[U,0],[0,(U*)^-1]] for GL_2(Z[i]) generators
        auto rot = [&](GaussInt a, GaussInt b, GaussInt c, GaussInt d) {
            Mat2K U = mat2k(a, b, c, d);
            Mat2K V = U.conj_transpose().inverse();
            if (!V.is_integral()) throw std::logic_error("rotation generator not unimodular");
            GMat4 m;
            for (auto& row : m) row = {GaussInt(0), GaussInt(0), GaussInt(0), GaussInt(0)};
            m[0][0] = kelem_gauss(U.a); m[0][1] = kelem_gauss(U.b);
            m[1][0] = kelem_gauss(U.c); m[1][1] = kelem_gauss(U.d);
            m[2][2] = kelem_gauss(V.a); m[2][3] = kelem_gauss(V.b);
            m[3][2] = kelem_gauss(V.c); m[3][3] = kelem_gauss(V.d);
            out.push_back(m);
        };
        rot(GaussInt(0), GaussInt(1), GaussInt(1), GaussInt(0));
        rot(GaussInt(1), GaussInt(1), GaussInt(0), GaussInt(1));
        rot(GaussInt(1), GaussInt(-1), GaussInt(0), GaussInt(1));
        rot(GaussInt(1), GaussInt(0, 1), GaussInt(0), GaussInt(1));
        rot(GaussInt(1), GaussInt(0, -1), GaussInt(0), GaussInt(1));
        rot(GaussInt(0, 1), GaussInt(0), GaussInt(0), GaussInt(1));
        rot(GaussInt(0, -1), GaussInt(0), GaussInt(0), GaussInt(1));
        return out;
    }();
    return gens;
}

// canonical keys of the right cosets of Gamma a Gamma, a = the diagonal
// model of the operator
inline std::set<std::string> double_coset_keys(const HeckeOpSpec& op) {
    GMat4 a;
    for (auto& row : a) row = {GaussInt(0), GaussInt(0), GaussInt(0), GaussInt(0)};
    long p = op.p;
    switch (op.kind) {
        case HeckeKind::Tp_inert:
        case HeckeKind::Tp_split:
            a[0][0] = GaussInt(1); a[1][1] = GaussInt(1);
            a[2][2] = GaussInt(p); a[3][3] = GaussInt(p);
            break;
        case HeckeKind::Tpi_split:
            a[0][0] = GaussInt(1); a[1][1] = op.pi;
            a[2][2] = GaussInt(p); a[3][3] = op.pi;
            break;
        case HeckeKind::T1p_inert:
            a[0][0] = GaussInt(1); a[1][1] = GaussInt(p);
            a[2][2] = GaussInt(p * p); a[3][3] = GaussInt(p);
            break;
    }
    std::set<std::string> seen;
    std::vector<GMat4> frontier{hnf4(a)};
    seen.insert(gmat_key(frontier[0]));
    while (!frontier.empty()) {
        std::vector<GMat4> next;
        for (const auto& h : frontier)
            for (const auto& g : gamma_generators()) {
                GMat4 n = hnf4(gmat_mul(h, g));
                auto key = gmat_key(n);
                if (seen.insert(key).second) next.push_back(n);
            }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace cosets_detail

// Enumerate the right cosets of the double coset of `op` (similitude p for
// T_p/T_pi, p^2 for T_{1,p}).
inline CosetList enumerate_cosets(const HeckeOpSpec& op) {
    using namespace cosets_detail;
    const long p = op.p;
    int e = (op.kind == HeckeKind::T1p_inert) ? 2 : 1;
    Int mu = 1;
    for (int i = 0; i < e; ++i) mu *= p;
    auto target = target_type(op);
    auto keys = double_coset_keys(op);

    CosetList list;
    list.op = op;
    list.mu = mu;

    auto divisors = gauss_divisors(p, e);
    for (const auto& a : divisors)
        for (const auto& d : divisors) {
            for (const auto& b : residues_mod(d)) {
                Mat2K A = mat2k(a, b, GaussInt(0), d);
                KElem detA = A.det();
                if (detA.is_zero()) continue;
                // D = mu (A*)^{-1}
                Mat2K D = A.conj_transpose().inverse().scaled(KElem(GaussInt(mu)));
                if (!D.is_integral()) continue;

                // B-lattice: solve D*B = B*D over the 8 integer coordinates
                ZMat cond;  // rows: real-linear conditions
                {
                    // build condition matrix by evaluating on coordinate basis
                    for (int entry = 0; entry < 4; ++entry)
                        for (int part = 0; part < 2; ++part)
                            cond.push_back(std::vector<Int>(8, 0));
                    for (int j = 0; j < 8; ++j) {
                        std::array<Int, 8> x{};
                        x[j] = 1;
                        Mat2K Bj = matrix_of(x);
                        Mat2K R = D.conj_transpose() * Bj - Bj.conj_transpose() * D;
                        const KElem* es[4] = {&R.a, &R.b, &R.c, &R.d};
                        for (int entry = 0; entry < 4; ++entry) {
                            GaussInt v = kelem_gauss(*es[entry]);
                            cond[2 * entry][j] = v.re;
                            cond[2 * entry + 1][j] = v.im;
                        }
                    }
                }
                auto kernel = integer_kernel(cond);
                if (kernel.size() != 4)
                    throw std::logic_error("enumerate_cosets: B-solution lattice has rank != 4");

                // translation sublattice {S D : S hermitian}
                std::vector<std::vector<Int>> trans;
                {
                    std::vector<Mat2K> sgen = {
                        mat2k(1, 0, 0, 0), mat2k(0, 0, 0, 1),
                        mat2k(GaussInt(0), GaussInt(1), GaussInt(1), GaussInt(0)),
                        mat2k(GaussInt(0), GaussInt(0, 1), GaussInt(0, -1), GaussInt(0))};
                    for (auto& s : sgen) {
                        auto c = coords_of(s * D);
                        trans.push_back(std::vector<Int>(c.begin(), c.end()));
                    }
                }
                // express trans in kernel coordinates: solve K m = t
                ZMat Kb(8, std::vector<Int>(4));
                for (int i = 0; i < 8; ++i)
                    for (int j = 0; j < 4; ++j) Kb[i][j] = kernel[j][i];
                ZMat M(4, std::vector<Int>(4));
                for (int t = 0; t < 4; ++t) {
                    // rational solve
                    std::vector<std::vector<Rat>> aug(8, std::vector<Rat>(5));
                    for (int i = 0; i < 8; ++i) {
                        for (int j = 0; j < 4; ++j) aug[i][j] = Rat(Kb[i][j]);
                        aug[i][4] = Rat(trans[t][i]);
                    }
                    // least-structure Gaussian elimination
                    size_t rank = 0;
                    std::vector<int> pivcol;
                    for (size_t col = 0; col < 4 && rank < 8; ++col) {
                        size_t piv = rank;
                        while (piv < 8 && aug[piv][col] == 0) ++piv;
                        if (piv == 8) continue;
                        std::swap(aug[piv], aug[rank]);
                        Rat inv = 1 / aug[rank][col];
                        for (auto& x : aug[rank]) x *= inv;
                        for (size_t r = 0; r < 8; ++r) {
                            if (r == rank || aug[r][col] == 0) continue;
                            Rat f = aug[r][col];
                            for (size_t c = 0; c < 5; ++c) aug[r][c] -= f * aug[rank][c];
                        }
                        pivcol.push_back(static_cast<int>(col));
                        ++rank;
                    }
                    std::vector<Rat> sol(4, Rat(0));
                    for (size_t r = 0; r < rank; ++r) sol[static_cast<size_t>(pivcol[r])] = aug[r][4];
                    for (size_t r = rank; r < 8; ++r)
                        if (aug[r][4] != 0)
                            throw std::logic_error("enumerate_cosets: translation not in B-lattice");
                    for (int j = 0; j < 4; ++j) {
                        if (sol[j].get_den() != 1)
                            throw std::logic_error("enumerate_cosets: non-integral translation coords");
                        M[j][t] = sol[j].get_num();
                    }
                }
                // quotient representatives via Smith form of M
                auto snf = smith_normal_form(M);
                ZMat uinv = unimodular_inverse(snf.u);
                // new kernel basis: K' = K * U^{-1}; quotient = sum t_j K'_j, 0 <= t_j < d_j
                std::vector<std::array<Int, 8>> newbasis(4);
                for (int j = 0; j < 4; ++j)
                    for (int i = 0; i < 8; ++i) {
                        Int acc = 0;
                        for (int t = 0; t < 4; ++t) acc += Kb[i][t] * uinv[t][j];
                        newbasis[j][i] = acc;
                    }
                std::array<long, 4> card{};
                for (int j = 0; j < 4; ++j) {
                    Int dj = snf.d[j][j];
                    if (dj == 0) throw std::logic_error("enumerate_cosets: infinite quotient");
                    card[j] = Int(abs(dj)).get_si();
                }
                std::array<long, 4> idx{};
                for (idx[0] = 0; idx[0] < card[0]; ++idx[0])
                    for (idx[1] = 0; idx[1] < card[1]; ++idx[1])
                        for (idx[2] = 0; idx[2] < card[2]; ++idx[2])
                            for (idx[3] = 0; idx[3] < card[3]; ++idx[3]) {
                                std::array<Int, 8> x{};
                                for (int i = 0; i < 8; ++i) {
                                    x[i] = 0;
                                    for (int j = 0; j < 4; ++j)
                                        x[i] += Int(idx[j]) * newbasis[j][i];
                                }
                                CosetRep rep{A, matrix_of(x), D};
                                // elementary divisors as a cheap prefilter,
                                // then exact double-coset membership
                                if (!same_type(ed_type(rep), target)) continue;
                                if (keys.count(gmat_key(hnf4(to_gmat(rep)))))
                                    list.reps.push_back(rep);
                            }
            }
        }
    if (list.reps.size() != keys.size())
        throw std::logic_error("enumerate_cosets: found " + std::to_string(list.reps.size()) +
                               " representatives for " + std::to_string(keys.size()) +
                               " cosets");
    return list;
}

// g_i g_j^{-1} in Gamma_Z test, for validation of pairwise inequivalence
inline bool left_equivalent(const CosetRep& x, const CosetRep& y) {
    Mat2K Ayi = y.A.inverse();
    Mat2K Dyi = y.D.inverse();
    Mat2K A = x.A * Ayi;
    Mat2K D = x.D * Dyi;
    Mat2K B = x.B * Dyi - x.A * Ayi * y.B * Dyi;
    if (!A.is_integral() || !D.is_integral() || !B.is_integral()) return false;
    // similitude 1 and block conditions: A* D = I, D* B hermitian
    Mat2K ad = A.conj_transpose() * D;
    if (!(ad == Mat2K::identity())) return false;
    Mat2K h = D.conj_transpose() * B;
    if (!(h.b == h.c.conj())) return false;
    if (!(h.a == h.a.conj()) || !(h.d == h.d.conj())) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Slash evaluation with exact phases.

// phase accumulator over L[zeta_{p^E}] with i-powers folded into L
class CyclotomicAccumulator {
  public:
    CyclotomicAccumulator(FieldId fid, const NFElem& i_elem, long p, int E)
        : fid_(fid), i_(i_elem), p_(p) {
        pe_ = 1;
        for (int j = 0; j < E; ++j) pe_ *= p;
        vec_.assign(static_cast<size_t>(pe_), NFElem::zero(fid_));
    }

    // add value * e(r) with r rational
    void add(const NFElem& value, const Rat& r) {
        Rat fr = r - Rat(floor_of(r));
        Int den = fr.get_den(), num = fr.get_num();
        // den = d4 * dp with d4 | 4 and dp | p^E
        Int d4 = 1, dp = 1, rest = den;
        while (rest % 2 == 0) { d4 *= 2; rest /= 2; }
        while (rest % p_ == 0) { dp *= p_; rest /= p_; }
        if (rest != 1 || d4 > 4 || pe_ % dp != 0)
            throw std::domain_error("phase not a root of unity of supported order: e(" +
                                    fr.get_str() + ")");
        // CRT split: num/den = x/d4 + y/dp (mod 1)
        long ipow = 0;
        Int y = 0;
        if (d4 == 1 && dp == 1) {
            // integral exponent
        } else if (dp == 1) {
            ipow = Int((num * Int(4 / d4)) % 4 + 4).get_si() % 4;
        } else if (d4 == 1) {
            y = ((num % dp) + dp) % dp;
        } else {
            // num/(d4 dp): x = num * inv(dp) mod d4, y = num * inv(d4) mod dp
            Int invdp, invd4;
            if (!mpz_invert(invdp.get_mpz_t(), dp.get_mpz_t(), d4.get_mpz_t()) ||
                !mpz_invert(invd4.get_mpz_t(), d4.get_mpz_t(), dp.get_mpz_t()))
                throw std::logic_error("CyclotomicAccumulator: CRT failure");
            Int x = ((num * invdp) % d4 + d4) % d4;
            y = ((num * invd4) % dp + dp) % dp;
            ipow = Int(x * Int(4 / d4)).get_si() % 4;
        }
        NFElem v = value;
        for (int j = 0; j < ipow; ++j) v = v * i_;
        size_t slot = static_cast<size_t>(Int((y * Int(pe_ / dp)) % pe_).get_si());
        vec_[slot] += v;
    }

    // reduce modulo Phi_{p^E} and demand the result be constant
    NFElem finish() const {
        long pe = pe_;
        ZPoly phi = cyclotomic(pe);
        int deg = z_deg(phi);
        // rows: x^j mod phi for j = deg .. pe-1
        std::vector<std::vector<Int>> rows;
        {
            ZPoly cur(phi.begin(), phi.end() - 1);  // x^deg = -lower part
            for (auto& c : cur) c = -c;
            for (long j = deg; j < pe; ++j) {
                rows.push_back(std::vector<Int>(cur.begin(), cur.end()));
                // multiply by x
                ZPoly nxt(deg, 0);
                Int top = cur[deg - 1];
                for (int i = deg - 1; i >= 1; --i) nxt[i] = cur[i - 1];
                for (int i = 0; i < deg; ++i) nxt[i] += top * -phi[i];
                cur = std::move(nxt);
            }
        }
        std::vector<NFElem> red(static_cast<size_t>(deg), NFElem::zero(fid_));
        for (long j = 0; j < pe; ++j) {
            const NFElem& c = vec_[static_cast<size_t>(j)];
            if (c.is_zero()) continue;
            if (j < deg) {
                red[static_cast<size_t>(j)] += c;
            } else {
                const auto& row = rows[static_cast<size_t>(j - deg)];
                for (int i = 0; i < deg; ++i)
                    if (row[i] != 0) red[static_cast<size_t>(i)] += c.scaled(Rat(row[i]));
            }
        }
        for (size_t i = 1; i < red.size(); ++i)
            if (!red[i].is_zero())
                throw std::logic_error(
                    "apply_via_cosets: result has a nonconstant cyclotomic part");
        return red[0];
    }

  private:
    static Int floor_of(const Rat& r) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
        return q;
    }
    FieldId fid_;
    NFElem i_;
    long p_;
    long pe_ = 1;
    std::vector<NFElem> vec_;
};

inline NFElem gauss_in_field(const GaussInt& z, FieldId fid, const NFElem& i_elem) {
    NFElem r = NFElem::make_rational(fid, Rat(z.re));
    return r + i_elem.scaled(Rat(z.im));
}

// coefficient of (sum_j F|_k a_j) at index B_out
inline NFElem apply_via_cosets_at(const CosetList& list, const HermitianFourier& F,
                                  const NFElem& i_elem, const HermitianIndex& B_out) {
    const int k = F.k;
    CyclotomicAccumulator acc(F.fid, i_elem, list.op.p,
                              list.op.kind == HeckeKind::T1p_inert ? 2 : 2);
    Rat mu_factor;
    {
        Int m = 1;
        for (int j = 0; j < 2 * k - 4; ++j) m *= list.mu;
        mu_factor = Rat(m);
    }
    // B_out as an exact hermitian matrix
    Mat2K Bm{KElem(GaussInt(B_out.t1)), KElem(B_out.u, Int(2)),
             KElem(B_out.u.conj(), Int(2)), KElem(GaussInt(B_out.t3))};
    for (const auto& rep : list.reps) {
        // tau = mu A^-* B A^-1
        Mat2K Ainv = rep.A.inverse();
        Mat2K tau = Ainv.conj_transpose() * Bm * Ainv;
        tau = tau.scaled(KElem(GaussInt(list.mu)));
        // tau in S?
        KElem t1 = tau.a, t2 = tau.b, t3 = tau.d;
        KElem u2 = t2 * KElem(GaussInt(2));
        if (!t1.is_integral() || !t3.is_integral() || !u2.is_integral()) continue;
        if (t1.num.im != 0 || t3.num.im != 0) continue;
        HermitianIndex tau_idx{t1.num.re, u2.num, t3.num.re};
        NFElem c = F.coeff(tau_idx);
        if (c.is_zero()) continue;
        // phase: e(tr(tau B D^{-1}))
        Mat2K Dinv = rep.D.inverse();
        Mat2K ph = tau * rep.B * Dinv;
        KElem tr = ph.a + ph.d;
        if (tr.num.im != 0) throw std::logic_error("apply_via_cosets: non-real phase exponent");
        Rat r(tr.num.re, tr.den);
        // scalar: mu^{2k-4} det(D)^{-k}
        GaussInt detD = cosets_detail::kelem_gauss(rep.D.det());
        NFElem scal = gauss_in_field(detD, F.fid, i_elem).pow(k).inverse().scaled(mu_factor);
        acc.add(c * scal, r);
    }
    return acc.finish();
}

// Full table, with the T_pi normalization applied when requested so the
// result stays in the coefficient field.
inline HermitianFourier apply_via_cosets(const CosetList& list, const HermitianFourier& F,
                                         const NFElem& i_elem, long det4_bound_out,
                                         long t_bound_out) {
    HermitianFourier out =
        HermitianFourier::materialized(F.k, det4_bound_out, t_bound_out, F.fid);
    NFElem norm = NFElem::one(F.fid);
    if (list.op.kind == HeckeKind::Tpi_split && list.op.normalized) {
        // pi^k p^(2-k)
        NFElem pik = gauss_in_field(list.op.pi, F.fid, i_elem).pow(F.k);
        Rat pfac(1);
        for (int j = 0; j < F.k - 2; ++j) pfac /= Rat(list.op.p);
        norm = pik.scaled(pfac);
    }
    for (const auto& B : enumerate_indices(det4_bound_out, t_bound_out))
        out.table.emplace(B, apply_via_cosets_at(list, F, i_elem, B) * norm);
    return out;
}

}  // namespace caplift
