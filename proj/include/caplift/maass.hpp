#pragma once

// The Maass (CAP) lift: c* coefficients, hermitian Fourier tables, Jacobi
// theta components f_t, and Maass-space membership testing.

#include <map>
#include <memory>

#include "eigenform.hpp"
#include "hermitian.hpp"

namespace caplift {

// u(n) = #{t in A = {0, 1/2, i/2, (1+i)/2} : 4 N(t) = -n mod 4}
inline int u_of(long n) {
    if (n < 0) throw std::domain_error("u_of: n >= 0 required");
    static constexpr int table[4] = {1, 0, 1, 2};
    return table[n % 4];
}

// Context for lift arithmetic: the Hecke field adjoined i, the eigenform's
// coefficients mapped there, and their rho-conjugates.
struct LiftContext {
    Eigenform f;
    int k = 0;                 // hermitian weight, = weight(f) + 1
    CompositumWithI comp;      // field L containing theta and i
    std::vector<NFElem> b;     // b(n) in L, n <= bound
    std::vector<NFElem> brho;  // rho(b(n)) in L
    long bound = 0;

    FieldId field() const { return comp.field; }
};

inline LiftContext make_lift_context(const Eigenform& f, long bound = -1) {
    LiftContext ctx;
    ctx.f = f;
    ctx.k = f.weight + 1;
    if (ctx.k % 4 != 0)
        throw std::domain_error("lift: weight + 1 must be divisible by 4");
    if (bound < 0) bound = f.expansion.trunc;
    if (bound > f.expansion.trunc)
        throw std::domain_error("lift: eigenform truncation too small");
    ctx.bound = bound;
    ctx.comp = compositum_with_i(f.field);
    FieldHom rho = rho_automorphism(f);
    ctx.b.reserve(bound + 1);
    ctx.brho.reserve(bound + 1);
    for (long n = 0; n <= bound; ++n) {
        ctx.b.push_back(ctx.comp.from_base.apply(f.a(n)));
        ctx.brho.push_back(ctx.comp.from_base.apply(rho.apply(f.a(n))));
    }
    return ctx;
}

// c*(n) of Prop.-style support: 0 for n = 1 mod 4, else (-2i/u(n))(b(n) - rho b(n))
inline NFElem cstar(const LiftContext& ctx, long n) {
    if (n < 0) throw std::domain_error("cstar: n >= 0 required");
    if (n % 4 == 1) return NFElem::zero(ctx.field());
    if (n > ctx.bound) throw std::domain_error("cstar: beyond computed bound");
    NFElem diff = ctx.b[n] - ctx.brho[n];
    NFElem m2i = ctx.comp.i.scaled(Rat(-2, u_of(n)));
    return m2i * diff;
}

struct CStarTable {
    std::string source_id;
    FieldId fid = 0;
    long bound = 0;
    std::vector<NFElem> values;  // index n

    const NFElem& at(long n) const {
        if (n < 0 || n > bound) throw std::domain_error("CStarTable: out of range");
        return values[static_cast<size_t>(n)];
    }
};

inline CStarTable cstar_table(const LiftContext& ctx, long bound) {
    if (bound > ctx.bound) throw std::domain_error("cstar_table: beyond context bound");
    CStarTable t;
    t.source_id = ctx.f.id();
    t.fid = ctx.field();
    t.bound = bound;
    for (long n = 0; n <= bound; ++n) t.values.push_back(cstar(ctx, n));
    return t;
}

// c_F(B) = sum_{d | eps(B)} d^(k-1) c*(4 det B / d^2); 0 off the
// positive-definite support.
inline NFElem maass_coeff_from_cstar(const CStarTable& cs, int k, const HermitianIndex& B) {
    if (!B.positive_definite()) return NFElem::zero(cs.fid);
    Int eps = epsilon(B);
    Int d4 = B.det4();
    NFElem acc = NFElem::zero(cs.fid);
    for (Int d = 1; d <= eps; ++d) {
        if (eps % d != 0) continue;
        Int dd = d * d;
        Int n = d4 / dd;
        if (n * dd != d4) throw std::logic_error("maass_coeff: det4 not divisible by d^2");
        if (n > cs.bound) throw std::domain_error("maass_coeff: c* bound exceeded");
        Int mult = 1;
        for (int j = 0; j < k - 1; ++j) mult *= d;
        acc += cs.at(n.get_si()).scaled(Rat(mult));
    }
    return acc;
}

inline NFElem maass_coeff(const LiftContext& ctx, const HermitianIndex& B) {
    if (!B.positive_definite()) return NFElem::zero(ctx.field());
    Int d4 = B.det4();
    if (d4 > ctx.bound) throw std::domain_error("maass_coeff: bound exceeded");
    Int eps = epsilon(B);
    NFElem acc = NFElem::zero(ctx.field());
    for (Int d = 1; d <= eps; ++d) {
        if (eps % d != 0) continue;
        Int n = d4 / (d * d);
        if (n * d * d != d4) throw std::logic_error("maass_coeff: det4 not divisible by d^2");
        Int mult = 1;
        for (int j = 0; j < ctx.k - 1; ++j) mult *= d;
        acc += cstar(ctx, n.get_si()).scaled(Rat(mult));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Truncated hermitian Fourier expansions.  A table is either materialized
// (completeness contract over enumerate_indices(det4_bound, t_bound)) or
// backed by a c* table, in which case any positive-definite index with
// det4 within the c* bound is available.

class HermitianFourier {
  public:
    int k = 0;
    long det4_bound = 0;
    long t_bound = 0;
    FieldId fid = 0;
    std::map<HermitianIndex, NFElem> table;
    std::shared_ptr<CStarTable> backing;  // optional Maass backing

    static HermitianFourier materialized(int k, long det4_bound, long t_bound, FieldId fid) {
        HermitianFourier h;
        h.k = k;
        h.det4_bound = det4_bound;
        h.t_bound = t_bound;
        h.fid = fid;
        return h;
    }

    bool is_zero() const {
        for (auto& [b, c] : table)
            if (!c.is_zero()) return false;
        return table.empty() || true;
    }

    // coefficient at an arbitrary index of S; throws insufficient-data when
    // the index is beyond what the table can certify
    NFElem coeff(const HermitianIndex& B) const {
        if (!B.positive_definite()) return NFElem::zero(fid);
        auto it = table.find(B);
        if (it != table.end()) return it->second;
        if (B.det4() <= det4_bound && B.t1 <= t_bound && B.t3 <= t_bound &&
            !backing)
            throw std::domain_error("HermitianFourier: index missing inside declared bounds");
        if (backing) {
            if (B.det4() <= backing->bound)
                return maass_coeff_from_cstar(*backing, k, B);
            throw std::domain_error("HermitianFourier: insufficient data (c* bound)");
        }
        throw std::domain_error("HermitianFourier: insufficient data");
    }
};

// Complete lift table on enumerate_indices(det4_bound, t_bound), with c*
// backing so Hecke operators can reach beyond the materialized box.
inline HermitianFourier lift(const LiftContext& ctx, long det4_bound, long t_bound) {
    // degenerate lift: f = f^rho makes every c* vanish
    bool all_zero = true;
    for (long n = 0; n <= std::min<long>(ctx.bound, 64) && all_zero; ++n)
        all_zero = (ctx.b[n] == ctx.brho[n]);
    if (all_zero) throw std::domain_error("lift: degenerate (f = f^rho)");
    if (det4_bound > ctx.bound)
        throw std::domain_error("lift: det4 bound beyond eigenform truncation");
    HermitianFourier h = HermitianFourier::materialized(ctx.k, det4_bound, t_bound, ctx.field());
    h.backing = std::make_shared<CStarTable>(cstar_table(ctx, ctx.bound));
    for (const auto& B : enumerate_indices(det4_bound, t_bound))
        h.table.emplace(B, maass_coeff_from_cstar(*h.backing, ctx.k, B));
    return h;
}

// ---------------------------------------------------------------------------
// Jacobi theta components f_t: quarter-grid expansions supported on
// l = -4 N(t) mod 4.

enum class ThetaShift { zero, half, ihalf, onepihalf };

inline int theta_shift_norm4(ThetaShift t) {
    switch (t) {
        case ThetaShift::zero: return 0;
        case ThetaShift::half: return 1;
        case ThetaShift::ihalf: return 1;
        case ThetaShift::onepihalf: return 2;
    }
    return 0;
}

inline QExpansion f_component(const LiftContext& ctx, ThetaShift t, long bound) {
    if (bound > ctx.bound) throw std::domain_error("f_component: beyond computed bound");
    QExpansion r = QExpansion::zero(ctx.f.weight, CharFlag::chi_m4, bound, ctx.field(), true);
    int residue = ((-theta_shift_norm4(t)) % 4 + 4) % 4;
    for (long l = 0; l <= bound; ++l)
        if (l % 4 == residue) r.a(l) = cstar(ctx, l);
    return r;
}

// ---------------------------------------------------------------------------
// Maass-space membership: does a single-variable c* reproduce the whole
// table through the divisor sum?

struct MembershipResult {
    bool is_member = false;
    std::map<long, NFElem> reconstructed;  // c* values by n
    std::optional<HermitianIndex> witness;  // first violator when false
};

inline MembershipResult maass_membership(const HermitianFourier& F) {
    MembershipResult res;
    // reconstruct c* from content-1 indices
    std::map<long, NFElem> cs;
    for (const auto& [B, c] : F.table) {
        if (!B.positive_definite()) continue;
        if (epsilon(B) != 1) continue;
        long n = B.det4().get_si();
        auto it = cs.find(n);
        if (it == cs.end()) cs.emplace(n, c);
    }
    // verify every stored coefficient against the divisor sum
    for (const auto& [B, c] : F.table) {
        if (!B.positive_definite()) continue;
        Int eps = epsilon(B);
        NFElem acc = NFElem::zero(F.fid);
        for (Int d = 1; d <= eps; ++d) {
            if (eps % d != 0) continue;
            Int n = B.det4() / (d * d);
            if (n * d * d != B.det4()) throw std::logic_error("membership: bad divisor");
            if (n % 4 == 1) continue;  // c* vanishes there
            auto it = cs.find(n.get_si());
            if (it == cs.end())
                throw std::domain_error("maass_membership: insufficient data (no content-1 index with det4 = " +
                                        n.get_str() + ")");
            Int mult = 1;
            for (int j = 0; j < F.k - 1; ++j) mult *= d;
            acc += it->second.scaled(Rat(mult));
        }
        if (!(acc == c)) {
            res.is_member = false;
            res.witness = B;
            return res;
        }
    }
    res.is_member = true;
    res.reconstructed = std::move(cs);
    return res;
}

}  // namespace caplift
