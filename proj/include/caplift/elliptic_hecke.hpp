#pragma once

// Hecke operators T_n on level-4 expansions with nebentypus chi_-4:
// a_{T_n f}(m) = sum_{d | gcd(m,n)} chi(d) d^(w-1) a(mn/d^2).

#include "qexp.hpp"

namespace caplift {

inline QExpansion hecke_Tn(const QExpansion& f, long n, long out_trunc = -1) {
    if (f.quarter) throw std::domain_error("hecke_Tn: integral expansions only");
    if (n < 1) throw std::domain_error("hecke_Tn: n >= 1 required");
    if (out_trunc < 0) out_trunc = f.trunc / n;
    if (out_trunc * n > f.trunc)
        throw std::domain_error("hecke_Tn: insufficient truncation");
    QExpansion r = QExpansion::zero(f.weight, f.character, out_trunc, f.fid, false);
    for (long m = 0; m <= out_trunc; ++m) {
        NFElem acc = NFElem::zero(f.fid);
        long g = std::gcd(m, n);
        for (long d = 1; d <= g; ++d) {
            if (g % d != 0) continue;
            int chi = f.character == CharFlag::chi_m4 ? chi_m4(d) : 1;
            if (chi == 0) continue;
            Int mult = 1;
            for (int j = 0; j < f.weight - 1; ++j) mult *= d;
            long idx = (m / d) * (n / d);
            if (idx > f.trunc) throw std::domain_error("hecke_Tn: insufficient truncation");
            acc += f.a(idx).scaled(Rat(chi) * Rat(mult));
        }
        r.a(m) = acc;
    }
    return r;
}

}  // namespace caplift
