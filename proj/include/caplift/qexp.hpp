#pragma once

// Truncated q-expansions of elliptic modular forms of level 4.
// Exponents are integers, or quarter-integers when quarter_flag is set
// (coefficient index n stands for q^(n/4) in that case).

#include <vector>

#include "numberfield.hpp"

namespace caplift {

enum class CharFlag { trivial, chi_m4 };

// chi_-4(n): +1 for n = 1 mod 4, -1 for n = 3 mod 4, 0 for even n
inline int chi_m4(const Int& n) {
    Int r;
    mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), 4);
    long v = r.get_si();
    if (v == 1) return 1;
    if (v == 3) return -1;
    return 0;
}
inline int chi_m4(long n) { return chi_m4(Int(n)); }

struct QExpansion {
    int weight = 0;
    CharFlag character = CharFlag::trivial;
    bool quarter = false;
    long trunc = -1;  // coefficients stored for 0..trunc inclusive
    FieldId fid = 0;
    std::vector<NFElem> coeffs;

    static QExpansion zero(int w, CharFlag ch, long trunc, FieldId fid, bool quarter = false) {
        QExpansion f;
        f.weight = w;
        f.character = ch;
        f.quarter = quarter;
        f.trunc = trunc;
        f.fid = fid;
        f.coeffs.assign(static_cast<size_t>(trunc) + 1, NFElem::zero(fid));
        return f;
    }

    const NFElem& a(long n) const {
        if (n < 0 || n > trunc) throw std::out_of_range("QExpansion: coefficient index out of range");
        return coeffs[static_cast<size_t>(n)];
    }
    NFElem& a(long n) {
        if (n < 0 || n > trunc) throw std::out_of_range("QExpansion: coefficient index out of range");
        return coeffs[static_cast<size_t>(n)];
    }

    bool compatible(const QExpansion& o) const {
        return weight == o.weight && character == o.character && quarter == o.quarter &&
               fid == o.fid;
    }

    QExpansion operator+(const QExpansion& o) const {
        if (!compatible(o)) throw std::domain_error("QExpansion: incompatible operands");
        QExpansion r = zero(weight, character, std::min(trunc, o.trunc), fid, quarter);
        for (long n = 0; n <= r.trunc; ++n) r.a(n) = a(n) + o.a(n);
        return r;
    }
    QExpansion operator-(const QExpansion& o) const {
        if (!compatible(o)) throw std::domain_error("QExpansion: incompatible operands");
        QExpansion r = zero(weight, character, std::min(trunc, o.trunc), fid, quarter);
        for (long n = 0; n <= r.trunc; ++n) r.a(n) = a(n) - o.a(n);
        return r;
    }
    QExpansion scaled(const NFElem& s) const {
        QExpansion r = *this;
        for (auto& c : r.coeffs) c = c * s;
        return r;
    }
    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }

    // map coefficients into another field
    QExpansion mapped(const FieldHom& h) const {
        QExpansion r = *this;
        r.fid = h.to;
        for (auto& c : r.coeffs) c = h.apply(c);
        return r;
    }

    QExpansion truncated(long t) const {
        if (t > trunc) throw std::domain_error("QExpansion: cannot extend truncation");
        QExpansion r = *this;
        r.trunc = t;
        r.coeffs.resize(static_cast<size_t>(t) + 1);
        return r;
    }
};

}  // namespace caplift
