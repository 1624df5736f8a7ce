#pragma once

// Small number fields Q(theta) presented by a stored monic integral minimal
// polynomial; elements are exact rational vectors in the power basis.
// Degree is capped at 16 (compositum of a degree-8 Hecke field with Q(i)).

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fppoly.hpp"
#include "polyz.hpp"

namespace caplift {

constexpr int kMaxFieldDegree = 16;

using FieldId = int;

struct NumberField {
    ZPoly minpoly;  // monic, integer coefficients
    // x^{d+j} reduced mod minpoly, j = 0..d-2 (as rational coordinate rows)
    std::vector<std::vector<Rat>> highpow;

    int degree() const { return z_deg(minpoly); }
};

class Fields {
  public:
    static Fields& instance() {
        static Fields f;
        return f;
    }

    FieldId intern(const ZPoly& minpoly) {
        if (minpoly.empty() || minpoly.back() != 1)
            throw std::domain_error("field: minimal polynomial must be monic integral");
        if (z_deg(minpoly) > kMaxFieldDegree)
            throw std::domain_error("field: degree above supported cap");
        std::lock_guard<std::mutex> lock(mu_);
        for (size_t i = 0; i < fields_.size(); ++i)
            if (fields_[i]->minpoly == minpoly) return static_cast<FieldId>(i);
        auto nf = std::make_unique<NumberField>();
        nf->minpoly = minpoly;
        int d = z_deg(minpoly);
        // reduction rows for x^d .. x^{2d-2}
        std::vector<Rat> cur(d);  // coords of x^d
        for (int i = 0; i < d; ++i) cur[i] = -Rat(minpoly[i]);
        for (int j = 0; j <= d - 2; ++j) {
            nf->highpow.push_back(cur);
            // multiply by x
            std::vector<Rat> nxt(d);
            Rat top = cur[d - 1];
            for (int i = d - 1; i >= 1; --i) nxt[i] = cur[i - 1];
            nxt[0] = 0;
            for (int i = 0; i < d; ++i) nxt[i] += top * -Rat(minpoly[i]);
            cur = std::move(nxt);
        }
        fields_.push_back(std::move(nf));
        return static_cast<FieldId>(fields_.size() - 1);
    }

    const NumberField& get(FieldId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return *fields_.at(static_cast<size_t>(id));
    }

  private:
    mutable std::mutex mu_;
    std::vector<std::unique_ptr<NumberField>> fields_;
};

inline FieldId field_of(const ZPoly& minpoly) { return Fields::instance().intern(minpoly); }

inline FieldId rational_field() { return field_of(ZPoly{Int(0), Int(1)}); }  // x
inline FieldId gaussian_field() { return field_of(ZPoly{Int(1), Int(0), Int(1)}); }  // x^2+1

// ---------------------------------------------------------------------------

struct NFElem {
    FieldId fid = 0;
    std::vector<Rat> c;  // power-basis coordinates, size = degree

    NFElem() = default;
    NFElem(FieldId f, std::vector<Rat> coords) : fid(f), c(std::move(coords)) {}

    static NFElem make_rational(FieldId f, const Rat& x) {
        NFElem e;
        e.fid = f;
        e.c.assign(Fields::instance().get(f).degree(), Rat(0));
        e.c[0] = x;
        return e;
    }
    static NFElem zero(FieldId f) { return make_rational(f, 0); }
    static NFElem one(FieldId f) { return make_rational(f, 1); }
    static NFElem gen(FieldId f) {
        NFElem e = zero(f);
        if (e.c.size() < 2) throw std::domain_error("NFElem::gen: rational field has no generator");
        e.c[1] = 1;
        return e;
    }

    int degree() const { return static_cast<int>(c.size()); }
    bool is_zero() const {
        for (const auto& x : c)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) return false;
        return true;
    }
    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("NFElem: not rational");
        return c.empty() ? Rat(0) : c[0];
    }

    bool operator==(const NFElem& o) const { return fid == o.fid && c == o.c; }
    bool operator!=(const NFElem& o) const { return !(*this == o); }

    NFElem operator-() const {
        NFElem r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    NFElem operator+(const NFElem& o) const {
        check(o);
        NFElem r = *this;
        for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
        return r;
    }
    NFElem operator-(const NFElem& o) const {
        check(o);
        NFElem r = *this;
        for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
        return r;
    }
    NFElem& operator+=(const NFElem& o) { *this = *this + o; return *this; }
    NFElem& operator-=(const NFElem& o) { *this = *this - o; return *this; }

    NFElem operator*(const NFElem& o) const {
        check(o);
        const auto& nf = Fields::instance().get(fid);
        int d = nf.degree();
        std::vector<Rat> prod(2 * d - 1, Rat(0));
        for (int i = 0; i < d; ++i) {
            if (c[i] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (o.c[j] == 0) continue;
                prod[i + j] += c[i] * o.c[j];
            }
        }
        NFElem r = zero(fid);
        for (int i = 0; i < d; ++i) r.c[i] = prod[i];
        for (int j = 0; j <= d - 2 && d + j < static_cast<int>(prod.size()); ++j) {
            if (prod[d + j] == 0) continue;
            for (int i = 0; i < d; ++i) r.c[i] += prod[d + j] * nf.highpow[j][i];
        }
        return r;
    }
    NFElem& operator*=(const NFElem& o) { *this = *this * o; return *this; }

    NFElem scaled(const Rat& s) const {
        NFElem r = *this;
        for (auto& x : r.c) x *= s;
        return r;
    }

    NFElem inverse() const {
        if (is_zero()) throw std::domain_error("NFElem: inverse of zero");
        // extended Euclid in Q[x] against the minimal polynomial
        const auto& nf = Fields::instance().get(fid);
        QPoly a = to_qpoly(nf.minpoly);
        QPoly b(c.begin(), c.end());
        q_trim(b);
        QPoly s0{}, s1{Rat(1)};  // coefficients of b in the combination
        QPoly r0 = a, r1 = b;
        while (!r1.empty()) {
            auto [q, r2] = q_divmod(r0, r1);
            QPoly s2 = q_sub(s0, q_mul(q, s1));
            r0 = std::move(r1); r1 = std::move(r2);
            s0 = std::move(s1); s1 = std::move(s2);
        }
        if (q_deg(r0) != 0)
            throw std::domain_error("NFElem: not invertible (minimal polynomial not irreducible?)");
        Rat inv = 1 / r0[0];
        NFElem r = zero(fid);
        for (size_t i = 0; i < s0.size() && i < r.c.size(); ++i) r.c[i] = s0[i] * inv;
        return r;
    }
    NFElem operator/(const NFElem& o) const { return *this * o.inverse(); }

    // power with nonnegative exponent
    NFElem pow(long e) const {
        NFElem r = one(fid), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // deterministic order for table output
    bool operator<(const NFElem& o) const {
        if (fid != o.fid) return fid < o.fid;
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < c.size(); ++i) {
            if (i) s += ",";
            s += c[i].get_str();
        }
        return s + "]";
    }

  private:
    void check(const NFElem& o) const {
        if (fid != o.fid || c.size() != o.c.size())
            throw std::domain_error("NFElem: mixed fields");
    }
};

inline NFElem operator*(const Rat& s, const NFElem& e) { return e.scaled(s); }

// Matrix of multiplication by x in the power basis (rational entries).
inline std::vector<std::vector<Rat>> mult_matrix(const NFElem& x) {
    int d = x.degree();
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d));
    for (int j = 0; j < d; ++j) {
        NFElem basis = NFElem::zero(x.fid);
        basis.c[static_cast<size_t>(j)] = 1;
        NFElem col = x * basis;
        for (int i = 0; i < d; ++i) m[i][j] = col.c[i];
    }
    return m;
}

// x integral over Z iff the characteristic polynomial of multiplication
// by x has integer coefficients.
inline bool is_algebraic_integer(const NFElem& x);

// Characteristic polynomial of a rational matrix (Faddeev-LeVerrier).
inline QPoly charpoly(const std::vector<std::vector<Rat>>& m) {
    int n = static_cast<int>(m.size());
    auto matmul = [&](const std::vector<std::vector<Rat>>& a,
                      const std::vector<std::vector<Rat>>& b) {
        std::vector<std::vector<Rat>> r(n, std::vector<Rat>(n, Rat(0)));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (a[i][k] == 0) continue;
                for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
            }
        return r;
    };
    std::vector<Rat> coeff(n + 1, Rat(0));
    coeff[n] = 1;
    std::vector<std::vector<Rat>> mk = m;
    Rat ck;
    for (int k = 1; k <= n; ++k) {
        Rat tr = 0;
        for (int i = 0; i < n; ++i) tr += mk[i][i];
        ck = -tr / Rat(Int(k));
        coeff[n - k] = ck;
        if (k == n) break;
        for (int i = 0; i < n; ++i) mk[i][i] += ck;
        mk = matmul(m, mk);
    }
    QPoly out(coeff.begin(), coeff.end());
    return out;
}

inline bool is_algebraic_integer(const NFElem& x) {
    QPoly cp = charpoly(mult_matrix(x));
    for (const auto& c : cp)
        if (c.get_den() != 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Complex embeddings.  Roots are computed by Aberth iteration in double
// precision and polished by Newton in 256-bit GMP floats; ordering is
// (re, im) ascending, which fixes the embedding index.

struct CMpf {
    mpf_class re, im;
    CMpf() : re(0, 256), im(0, 256) {}
    CMpf(double r, double i) : re(r, 256), im(i, 256) {}
    CMpf operator+(const CMpf& o) const { CMpf r; r.re = re + o.re; r.im = im + o.im; return r; }
    CMpf operator-(const CMpf& o) const { CMpf r; r.re = re - o.re; r.im = im - o.im; return r; }
    CMpf operator*(const CMpf& o) const {
        CMpf r;
        r.re = re * o.re - im * o.im;
        r.im = re * o.im + im * o.re;
        return r;
    }
    CMpf operator/(const CMpf& o) const {
        mpf_class n = o.re * o.re + o.im * o.im;
        CMpf r;
        r.re = (re * o.re + im * o.im) / n;
        r.im = (im * o.re - re * o.im) / n;
        return r;
    }
    mpf_class abs2() const { return re * re + im * im; }
};

namespace detail {
inline std::vector<std::complex<double>> aberth_roots(const std::vector<double>& coeff) {
    int n = static_cast<int>(coeff.size()) - 1;
    std::vector<std::complex<double>> z(n);
    for (int i = 0; i < n; ++i) {
        double ang = 2 * 3.14159265358979323846 * i / n + 0.4;
        double rad = 0.5 + 1.3 * i / std::max(1, n);
        z[i] = std::polar(rad, ang);
    }
    auto eval = [&](std::complex<double> x, std::complex<double>& d) {
        std::complex<double> p = coeff[n], dp = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + coeff[i];
        }
        d = dp;
        return p;
    };
    for (int it = 0; it < 300; ++it) {
        double move = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> dp, p = eval(z[i], dp);
            if (std::abs(p) < 1e-300) continue;
            std::complex<double> w = p / dp;
            std::complex<double> s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            std::complex<double> delta = w / (1.0 - w * s);
            z[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-14) break;
    }
    return z;
}
}  // namespace detail

// All complex roots of the minimal polynomial, at 256-bit precision,
// sorted by (re, im).
inline std::vector<CMpf> field_roots(FieldId fid) {
    const auto& nf = Fields::instance().get(fid);
    int n = nf.degree();
    std::vector<double> cd(n + 1);
    for (int i = 0; i <= n; ++i) cd[i] = nf.minpoly[i].get_d();
    auto seeds = detail::aberth_roots(cd);
    std::vector<CMpf> out;
    for (auto s : seeds) {
        CMpf z(s.real(), s.imag());
        for (int it = 0; it < 200; ++it) {
            // Newton step with exact integer coefficients
            CMpf p(0, 0), dp(0, 0);
            for (int i = n; i >= 0; --i) {
                dp = dp * z + p;
                CMpf ci(0, 0);
                ci.re = mpf_class(nf.minpoly[i], 256);
                p = p * z + ci;
            }
            if (dp.abs2() == 0) break;
            CMpf step = p / dp;
            z = z - step;
            if (step.abs2() < mpf_class(1e-120, 256)) break;
        }
        // clean tiny imaginary parts of genuinely real roots
        out.push_back(z);
    }
    std::sort(out.begin(), out.end(), [](const CMpf& a, const CMpf& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });
    return out;
}

inline std::complex<double> embed(const NFElem& x, const CMpf& root) {
    CMpf acc(0, 0);
    for (size_t i = x.c.size(); i-- > 0;) {
        acc = acc * root;
        acc.re += mpf_class(x.c[i], 256);
    }
    return {acc.re.get_d(), acc.im.get_d()};
}

inline CMpf embed_mpf(const NFElem& x, const CMpf& root) {
    CMpf acc(0, 0);
    for (size_t i = x.c.size(); i-- > 0;) {
        acc = acc * root;
        acc.re += mpf_class(x.c[i], 256);
    }
    return acc;
}

// Continued-fraction recognition of a rational from a 256-bit float.
inline std::optional<Rat> recognize_rational(const mpf_class& x, const Int& den_bound,
                                             double tol = 1e-40) {
    mpf_class v = x;
    Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 120; ++it) {
        mpf_class fl = floor(v);
        Int a(fl);
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > den_bound) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        mpf_class frac = v - fl;
        if (frac < 1e-70) break;
        v = 1 / frac;
    }
    if (q1 == 0) return std::nullopt;
    Rat cand(p1, q1);
    cand.canonicalize();
    mpf_class err = abs(x - mpf_class(cand, 256));
    mpf_class scale = abs(x) + 1;
    if (err < scale * mpf_class(tol, 256)) return cand;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Field homomorphisms: determined by the image of the generator.

struct FieldHom {
    FieldId from = 0, to = 0;
    NFElem gen_image;  // element of `to`

    NFElem apply(const NFElem& x) const {
        if (x.fid != from) throw std::domain_error("FieldHom: wrong source field");
        NFElem acc = NFElem::zero(to);
        for (size_t i = x.c.size(); i-- > 0;) {
            acc = acc * gen_image;
            acc.c[0] += x.c[i];
        }
        return acc;
    }
};

// Roots of a rational polynomial P inside the field F, found numerically and
// verified exactly.  Exhaustive for deg(F) <= 4 or deg(P) <= 4; throws
// beyond that (desk-scale cap).
inline std::vector<NFElem> roots_in_field(const QPoly& P, FieldId fid) {
    const auto& nf = Fields::instance().get(fid);
    int d = nf.degree();
    int m = q_deg(P);
    if (m < 1) return {};
    if (d == 1) {
        // rational roots: denominators divide lc, numerators divide constant
        std::vector<NFElem> out;
        ZPoly zp = primitive_part(P);
        if (zp.empty()) return {};
        // scan divisors of the constant term over divisors of the leading one
        auto divisors = [](Int n) {
            std::vector<Int> out;
            n = abs(n);
            if (n == 0) { out.push_back(0); return out; }
            for (Int i = 1; i * i <= n; ++i)
                if (n % i == 0) {
                    out.push_back(i);
                    if (i * i != n) out.push_back(n / i);
                }
            return out;
        };
        for (const Int& num : divisors(zp[0]))
            for (const Int& den : divisors(zp.back()))
                for (int sign = -1; sign <= 1; sign += 2) {
                    if (den == 0) continue;
                    Rat r(sign * num, den);
                    r.canonicalize();
                    if (q_eval(P, r) == 0) {
                        NFElem e = NFElem::make_rational(fid, r);
                        bool dup = false;
                        for (auto& o : out) dup |= (o == e);
                        if (!dup) out.push_back(e);
                    }
                }
        std::sort(out.begin(), out.end());
        return out;
    }
    if (d > 4 && m > 4)
        throw std::domain_error("roots_in_field: degree above supported cap");

    auto roots_f = field_roots(fid);
    // numeric roots of P at 256 bits
    std::vector<CMpf> roots_p;
    {
        std::vector<double> cd(m + 1);
        for (int i = 0; i <= m; ++i) cd[i] = P[i].get_d();
        auto seeds = detail::aberth_roots(cd);
        for (auto s : seeds) {
            CMpf z(s.real(), s.imag());
            for (int it = 0; it < 200; ++it) {
                CMpf p(0, 0), dp(0, 0);
                for (int i = m; i >= 0; --i) {
                    dp = dp * z + p;
                    CMpf ci(0, 0);
                    ci.re = mpf_class(P[i], 256);
                    p = p * z + ci;
                }
                if (dp.abs2() == 0) break;
                CMpf step = p / dp;
                z = z - step;
                if (step.abs2() < mpf_class(1e-120, 256)) break;
            }
            roots_p.push_back(z);
        }
    }

    // candidate z in F: its embeddings are some assignment j -> pi(j) of
    // roots of P; solve the Vandermonde system for the coordinates and
    // verify exactly.
    std::vector<NFElem> found;
    std::vector<int> assign(d, 0);
    auto solve_and_check = [&]() {
        // V c = s, with V[j][a] = roots_f[j]^a
        std::vector<std::vector<CMpf>> A(d, std::vector<CMpf>(d + 1));
        for (int j = 0; j < d; ++j) {
            CMpf pw(1, 0);
            for (int a = 0; a < d; ++a) {
                A[j][a] = pw;
                pw = pw * roots_f[j];
            }
            A[j][d] = roots_p[assign[j]];
        }
        // Gaussian elimination in CMpf
        for (int col = 0; col < d; ++col) {
            int piv = -1;
            mpf_class best(0, 256);
            for (int r = col; r < d; ++r) {
                mpf_class v = A[r][col].abs2();
                if (piv < 0 || v > best) { piv = r; best = v; }
            }
            if (best == 0) return;
            std::swap(A[col], A[piv]);
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                CMpf factor = A[r][col] / A[col][col];
                for (int cc = col; cc <= d; ++cc) A[r][cc] = A[r][cc] - factor * A[col][cc];
            }
        }
        NFElem cand = NFElem::zero(fid);
        for (int a = 0; a < d; ++a) {
            CMpf v = A[a][d] / A[a][a];
            if (abs(v.im) > 1e-20) return;  // coordinates must be real rationals
            auto r = recognize_rational(v.re, Int("1000000000000"));
            if (!r) return;
            cand.c[a] = *r;
        }
        // exact verification: P(cand) == 0
        NFElem acc = NFElem::zero(fid);
        for (size_t i = P.size(); i-- > 0;) {
            acc = acc * cand;
            acc.c[0] += P[i];
        }
        if (!acc.is_zero()) return;
        for (auto& o : found)
            if (o == cand) return;
        found.push_back(cand);
    };
    size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<size_t>(m);
    for (size_t code = 0; code < total; ++code) {
        size_t t = code;
        for (int j = 0; j < d; ++j) {
            assign[j] = static_cast<int>(t % m);
            t /= m;
        }
        solve_and_check();
    }
    std::sort(found.begin(), found.end());
    return found;
}

// All automorphisms of F as generator images (includes the identity).
inline std::vector<NFElem> field_automorphisms(FieldId fid) {
    const auto& nf = Fields::instance().get(fid);
    if (nf.degree() == 1) return {NFElem::make_rational(fid, 0)};
    if (nf.degree() == 2) {
        // x^2 + b x + c: the conjugate root is -b - theta
        NFElem theta = NFElem::gen(fid);
        NFElem other = -theta;
        other.c[0] -= Rat(nf.minpoly[1]);
        return {theta, other};
    }
    return roots_in_field(to_qpoly(nf.minpoly), fid);
}

// ---------------------------------------------------------------------------
// Compositum of F with Q(i), presented flat over Q.

struct CompositumWithI {
    FieldId field = 0;     // the compositum L
    NFElem theta;          // image of the generator of F in L
    NFElem i;              // square root of -1 in L
    FieldHom from_base;    // F -> L
};

inline CompositumWithI compositum_with_i(FieldId fid) {
    const auto& nf = Fields::instance().get(fid);
    int d = nf.degree();
    // does F already contain i?
    {
        auto rts = roots_in_field(QPoly{Rat(1), Rat(0), Rat(1)}, fid);
        if (!rts.empty()) {
            CompositumWithI c;
            c.field = fid;
            c.theta = d == 1 ? NFElem::make_rational(fid, 0) : NFElem::gen(fid);
            // deterministic choice of i: the first in coordinate order
            c.i = rts.front();
            c.from_base = FieldHom{fid, fid, c.theta};
            return c;
        }
    }
    if (d == 1) {
        FieldId g = gaussian_field();
        CompositumWithI c;
        c.field = g;
        c.theta = NFElem::zero(g);
        c.i = NFElem::gen(g);
        c.from_base = FieldHom{fid, g, NFElem::zero(g)};
        return c;
    }
    // formal algebra A = F (x) Q(i): basis theta^a i^b, b in {0,1}
    int n = 2 * d;
    using Vec = std::vector<Rat>;
    auto mul_theta = [&](const Vec& v) {
        // multiply by theta in A
        Vec r(n, Rat(0));
        for (int b = 0; b < 2; ++b) {
            // component vector of theta^a coefficients
            std::vector<Rat> comp(d);
            for (int a = 0; a < d; ++a) comp[a] = v[a + b * d];
            std::vector<Rat> shifted(d, Rat(0));
            Rat top = comp[d - 1];
            for (int a = d - 1; a >= 1; --a) shifted[a] = comp[a - 1];
            for (int a = 0; a < d; ++a) shifted[a] += top * -Rat(nf.minpoly[a]);
            for (int a = 0; a < d; ++a) r[a + b * d] = shifted[a];
        }
        return r;
    };
    auto mul_i = [&](const Vec& v) {
        Vec r(n, Rat(0));
        for (int a = 0; a < d; ++a) {
            r[a + d] = v[a];      // i * theta^a
            r[a] = -v[a + d];     // i * theta^a i = -theta^a
        }
        return r;
    };
    for (long t = 1; t <= 8; ++t) {
        // powers of gamma = theta + t i
        std::vector<Vec> pows;
        Vec cur(n, Rat(0));
        cur[0] = 1;
        pows.push_back(cur);
        for (int j = 1; j <= n; ++j) {
            Vec a = mul_theta(cur), b = mul_i(cur);
            for (int s = 0; s < n; ++s) cur[s] = a[s] + Rat(t) * b[s];
            pows.push_back(cur);
        }
        // minimal dependence among pows: expect full rank through gamma^(n-1)
        // Gaussian elimination on the n x n matrix of the first n powers
        std::vector<Vec> M(n, Vec(n));
        for (int j = 0; j < n; ++j)
            for (int s = 0; s < n; ++s) M[s][j] = pows[j][s];
        // solve M * x = pows[n] and also invert M to express theta and i
        // (augmented elimination)
        std::vector<Vec> aug(n, Vec(2 * n + 3, Rat(0)));
        for (int r = 0; r < n; ++r) {
            for (int j = 0; j < n; ++j) aug[r][j] = M[r][j];
            aug[r][n] = pows[n][r];
            // e_theta has coordinate 1 at position 1 (theta = basis elt index 1)
            aug[r][n + 1] = (r == 1 && d > 1) ? Rat(1) : Rat(0);
            aug[r][n + 2] = (r == d) ? Rat(1) : Rat(0);  // e_i at index d
        }
        bool singular = false;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (aug[r][col] != 0) { piv = r; break; }
            if (piv < 0) { singular = true; break; }
            std::swap(aug[col], aug[piv]);
            Rat inv = 1 / aug[col][col];
            for (int cc = 0; cc < 2 * n + 3; ++cc) aug[col][cc] *= inv;
            for (int r = 0; r < n; ++r) {
                if (r == col || aug[r][col] == 0) continue;
                Rat f = aug[r][col];
                for (int cc = 0; cc < 2 * n + 3; ++cc) aug[r][cc] -= f * aug[col][cc];
            }
        }
        if (singular) continue;  // gamma not primitive, try next t
        // minpoly: gamma^n = sum x_j gamma^j  =>  m(x) = x^n - sum x_j x^j
        QPoly mp(n + 1, Rat(0));
        mp[n] = 1;
        for (int j = 0; j < n; ++j) mp[j] = -aug[j][n];
        // must be irreducible (A is a field iff i not in F and gamma primitive)
        auto fac = q_factor_monic(mp);
        if (fac.size() != 1 || fac[0].second != 1) continue;
        ZPoly zmp(mp.size());
        for (size_t j = 0; j < mp.size(); ++j) {
            if (mp[j].get_den() != 1) { zmp.clear(); break; }
            zmp[j] = mp[j].get_num();
        }
        if (zmp.empty()) continue;  // keep integral presentations only
        FieldId L = field_of(zmp);
        CompositumWithI c;
        c.field = L;
        c.theta = NFElem::zero(L);
        c.i = NFElem::zero(L);
        for (int j = 0; j < n; ++j) {
            c.theta.c[j] = aug[j][n + 1];
            c.i.c[j] = aug[j][n + 2];
        }
        // sanity: i^2 = -1 and minpoly_F(theta) = 0
        if (!(c.i * c.i + NFElem::one(L)).is_zero())
            throw std::logic_error("compositum_with_i: i image wrong");
        {
            NFElem acc = NFElem::zero(L);
            for (size_t j = nf.minpoly.size(); j-- > 0;) {
                acc = acc * c.theta;
                acc.c[0] += Rat(nf.minpoly[j]);
            }
            if (!acc.is_zero()) throw std::logic_error("compositum_with_i: theta image wrong");
        }
        c.from_base = FieldHom{fid, L, c.theta};
        return c;
    }
    throw std::domain_error("compositum_with_i: no primitive element found");
}

// ---------------------------------------------------------------------------
// Residue fields: a prime lambda above ell given by an irreducible factor of
// the minimal polynomial mod ell.

struct ResidueField {
    FieldId fid = 0;
    Int ell;
    FpPoly factor;  // monic irreducible mod ell

    FqCtx ctx() const { return FqCtx{FpCtx{ell}, factor}; }
    int degree() const { return fp_deg(factor); }
};

inline std::vector<ResidueField> residue_fields(FieldId fid, const Int& ell) {
    const auto& nf = Fields::instance().get(fid);
    FpCtx F{ell};
    FpPoly mp(nf.minpoly.begin(), nf.minpoly.end());
    std::vector<ResidueField> out;
    for (auto& [fac, mult] : fp_factor(F, fp_reduce(F, std::move(mp))))
        out.push_back(ResidueField{fid, ell, fac});
    return out;
}

// Image of x under O_F -> O_F/lambda; errors when a denominator is
// divisible by ell.
inline FqElem reduce_mod(const NFElem& x, const ResidueField& rf) {
    if (x.fid != rf.fid) throw std::domain_error("reduce_mod: wrong field");
    FqCtx Q = rf.ctx();
    FpPoly poly;
    for (size_t a = 0; a < x.c.size(); ++a) {
        Int num = x.c[a].get_num(), den = x.c[a].get_den();
        if (den % rf.ell == 0 && num % rf.ell != 0)
            throw std::domain_error("reduce_mod: denominator divisible by ell (not integral at lambda)");
        if (den % rf.ell == 0)
            throw std::domain_error("reduce_mod: denominator divisible by ell");
        Int v = Q.F.mul(Q.F.reduce(num), Q.F.inv(Q.F.reduce(den)));
        poly.push_back(v);
    }
    fp_trim(poly);
    return fq_make(Q, std::move(poly));
}

}  // namespace caplift
