#pragma once

// Primitive normalized eigenforms of S_m(4, chi_-4), with exact coefficients
// in the Hecke field.  Every eigenform here is primitive because chi_-4 is
// a primitive character.

#include <string>

#include "elliptic_hecke.hpp"
#include "elliptic_space.hpp"

namespace caplift {

struct Eigenform {
    int weight = 0;
    FieldId field = 0;
    int embedding = 0;        // index into field_roots(field), (re, im) order
    int orbit = 0;            // index of the Galois orbit at this weight
    QExpansion expansion;     // a(1) = 1, coefficients in the Hecke field
    ZPoly minpoly;            // minimal polynomial of the Hecke field

    const NFElem& a(long n) const { return expansion.a(n); }
    std::string id() const {
        return "w" + std::to_string(weight) + ".o" + std::to_string(orbit) + ".e" +
               std::to_string(embedding);
    }
};

namespace detail {

// coordinates of an expansion in an echelonized basis, unique if it lies in
// the span; verified coefficientwise
inline std::vector<NFElem> coords_in_basis(const QExpansion& f,
                                           const std::vector<QExpansion>& basis,
                                           const std::vector<long>& pivots) {
    std::vector<NFElem> coords;
    for (size_t r = 0; r < basis.size(); ++r) coords.push_back(f.a(pivots[r]));
    QExpansion rec = QExpansion::zero(f.weight, f.character, f.trunc, f.fid);
    for (size_t r = 0; r < basis.size(); ++r)
        rec = rec + basis[r].truncated(f.trunc).scaled(coords[r]);
    for (long n = 0; n <= f.trunc; ++n)
        if (!(rec.a(n) == f.a(n)))
            throw std::logic_error("coords_in_basis: expansion not in span (Hecke stability?)");
    return coords;
}

inline std::vector<long> pivot_columns(const std::vector<QExpansion>& basis) {
    std::vector<long> pivots;
    for (const auto& b : basis) {
        long p = -1;
        for (long n = 0; n <= b.trunc; ++n)
            if (!b.a(n).is_zero()) { p = n; break; }
        if (p < 0) throw std::logic_error("pivot_columns: zero basis vector");
        pivots.push_back(p);
    }
    return pivots;
}

}  // namespace detail

// Simultaneous eigenbasis of the Hecke action on S_m(4, chi_-4).
// Deterministic: generator prime = smallest p with squarefree characteristic
// polynomial; ordering by (minpoly degree, minpoly, embedding index).
inline std::vector<Eigenform> eigenforms(int m, long trunc) {
    auto basis = cusp_basis(m, trunc);
    std::vector<Eigenform> out;
    if (basis.empty()) return out;
    size_t dim = basis.size();
    auto pivots = detail::pivot_columns(basis);
    long maxpivot = *std::max_element(pivots.begin(), pivots.end());

    // generator Hecke operator
    long p0 = 0;
    std::vector<std::vector<Rat>> M(dim, std::vector<Rat>(dim));
    QPoly cp;
    for (long p = 2;; ++p) {
        bool isprime = p >= 2;
        for (long q = 2; q * q <= p; ++q)
            if (p % q == 0) isprime = false;
        if (!isprime) continue;
        if (p * maxpivot > trunc)
            throw std::domain_error("eigenforms: truncation too small for a generator operator");
        long out_trunc = trunc / p;
        std::vector<std::vector<NFElem>> cols;
        for (size_t j = 0; j < dim; ++j) {
            QExpansion tb = hecke_Tn(basis[j], p, out_trunc);
            std::vector<QExpansion> tbasis;
            for (auto& b : basis) tbasis.push_back(b.truncated(out_trunc));
            cols.push_back(detail::coords_in_basis(tb, tbasis, pivots));
        }
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = 0; j < dim; ++j)
                M[i][j] = cols[j][i].rational_value();
        cp = charpoly(M);
        if (q_squarefree(cp)) { p0 = p; break; }
    }
    (void)p0;

    // split into Galois orbits
    auto factors = q_factor_monic(cp);
    int orbit_index = 0;
    for (auto& [P, mult] : factors) {
        if (mult != 1) throw std::logic_error("eigenforms: squarefree charpoly had multiplicity");
        ZPoly zp(P.size());
        for (size_t i = 0; i < P.size(); ++i) {
            if (P[i].get_den() != 1)
                throw std::logic_error("eigenforms: Hecke charpoly factor not integral");
            zp[i] = P[i].get_num();
        }
        FieldId L = field_of(zp);
        int d = z_deg(zp);
        NFElem theta = d == 1 ? NFElem::make_rational(L, -Rat(zp[0])) : NFElem::gen(L);

        // kernel of (M - theta I) over L
        size_t n = dim;
        std::vector<std::vector<NFElem>> A(n, std::vector<NFElem>(n, NFElem::zero(L)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                A[i][j] = NFElem::make_rational(L, M[i][j]);
                if (i == j) A[i][j] -= theta;
            }
        // Gaussian elimination
        std::vector<int> pivot_of_col(n, -1);
        size_t rank = 0;
        for (size_t col = 0; col < n && rank < n; ++col) {
            size_t piv = rank;
            while (piv < n && A[piv][col].is_zero()) ++piv;
            if (piv == n) continue;
            std::swap(A[piv], A[rank]);
            NFElem inv = A[rank][col].inverse();
            for (auto& x : A[rank]) x = x * inv;
            for (size_t rr = 0; rr < n; ++rr) {
                if (rr == rank || A[rr][col].is_zero()) continue;
                NFElem f = A[rr][col];
                for (size_t cc = 0; cc < n; ++cc) A[rr][cc] -= f * A[rank][cc];
            }
            pivot_of_col[col] = static_cast<int>(rank);
            ++rank;
        }
        if (rank != n - 1)
            throw std::logic_error("eigenforms: eigenvalue multiplicity >1 (not simple)");
        // free column gives the kernel vector
        std::vector<NFElem> v(n, NFElem::zero(L));
        size_t freecol = 0;
        for (size_t col = 0; col < n; ++col)
            if (pivot_of_col[col] < 0) freecol = col;
        v[freecol] = NFElem::one(L);
        for (size_t col = 0; col < n; ++col)
            if (pivot_of_col[col] >= 0)
                v[col] = -A[static_cast<size_t>(pivot_of_col[col])][freecol];

        // assemble the eigen-expansion over L
        QExpansion g = QExpansion::zero(m, CharFlag::chi_m4, trunc, L);
        for (size_t r = 0; r < n; ++r) {
            if (v[r].is_zero()) continue;
            for (long c = 0; c <= trunc; ++c) {
                if (basis[r].a(c).is_zero()) continue;
                g.a(c) += v[r].scaled(basis[r].a(c).rational_value());
            }
        }
        if (g.a(1).is_zero()) throw std::logic_error("eigenforms: a(1) = 0 on an eigenform");
        g = g.scaled(g.a(1).inverse());

        // verify simultaneous eigenvector property on a few operators
        for (long q : {2L, 3L, 5L}) {
            if (q * 8 > trunc) break;
            QExpansion tg = hecke_Tn(g, q, std::min(trunc / q, trunc / 2));
            NFElem lam = g.a(q);
            for (long c = 0; c <= tg.trunc; ++c)
                if (!(tg.a(c) == lam * g.a(c)))
                    throw std::logic_error("eigenforms: not a simultaneous eigenvector");
        }

        for (int e = 0; e < d; ++e) {
            Eigenform f;
            f.weight = m;
            f.field = L;
            f.embedding = e;
            f.orbit = orbit_index;
            f.expansion = g;
            f.minpoly = zp;
            out.push_back(std::move(f));
        }
        ++orbit_index;
    }
    std::sort(out.begin(), out.end(), [](const Eigenform& x, const Eigenform& y) {
        if (x.minpoly.size() != y.minpoly.size()) return x.minpoly.size() < y.minpoly.size();
        for (size_t i = x.minpoly.size(); i-- > 0;)
            if (x.minpoly[i] != y.minpoly[i]) return x.minpoly[i] < y.minpoly[i];
        return x.embedding < y.embedding;
    });
    // re-number orbits after sorting
    return out;
}

// The field automorphism realizing complex conjugation on the coefficients:
// fixes a(p) at split p, negates a(p) at inert p (Fact-1 pattern).  Errors
// when no automorphism matches.
inline FieldHom rho_automorphism(const Eigenform& f, long certify_bound = 200) {
    FieldId L = f.field;
    long bound = std::min<long>(certify_bound, f.expansion.trunc);
    auto auts = field_automorphisms(L);
    for (const auto& image : auts) {
        FieldHom h{L, L, image};
        bool ok = true;
        for (long p = 3; p <= bound && ok; ++p) {
            bool isprime = true;
            for (long q = 2; q * q <= p; ++q)
                if (p % q == 0) isprime = false;
            if (!isprime || p % 2 == 0) continue;
            NFElem want = f.a(p).scaled(Rat(chi_m4(p)));
            if (!(h.apply(f.a(p)) == want)) ok = false;
        }
        if (!ok) continue;
        // involution check
        if (!(h.apply(h.gen_image) ==
              (Fields::instance().get(L).degree() == 1 ? h.gen_image : NFElem::gen(L))))
            continue;
        return h;
    }
    throw std::domain_error("rho_automorphism: no conjugation automorphism found");
}

inline Eigenform rho_conjugate(const Eigenform& f) {
    FieldHom h = rho_automorphism(f);
    Eigenform r = f;
    for (auto& c : r.expansion.coeffs) c = h.apply(c);
    return r;
}

}  // namespace caplift
