#pragma once

// Integer lattice utilities: kernels, Hermite and Smith normal forms.
// Matrices are small (<= 16 on a side) so plain Euclidean reduction is fine.

#include <vector>

#include "gauss.hpp"

namespace caplift {

using ZMat = std::vector<std::vector<Int>>;

inline ZMat zmat_identity(size_t n) {
    ZMat m(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ZMat zmat_mul(const ZMat& a, const ZMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    ZMat r(n, std::vector<Int>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

// Saturated basis of { v in Z^cols : M v = 0 }, as columns collected into a
// vector of coordinate vectors.  Column reduction of M with the identity
// carried along.
inline std::vector<std::vector<Int>> integer_kernel(ZMat m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    ZMat u = zmat_identity(cols);
    auto colswap = [&](size_t i, size_t j) {
        for (size_t r = 0; r < rows; ++r) std::swap(m[r][i], m[r][j]);
        for (size_t r = 0; r < cols; ++r) std::swap(u[r][i], u[r][j]);
    };
    auto coladd = [&](size_t dst, size_t src, const Int& q) {  // col_dst -= q col_src
        for (size_t r = 0; r < rows; ++r) m[r][dst] -= q * m[r][src];
        for (size_t r = 0; r < cols; ++r) u[r][dst] -= q * u[r][src];
    };
    size_t rank = 0;
    for (size_t row = 0; row < rows && rank < cols; ++row) {
        // reduce columns rank..cols-1 against each other on this row
        for (;;) {
            size_t piv = cols;
            Int best;
            for (size_t c = rank; c < cols; ++c)
                if (m[row][c] != 0 && (piv == cols || abs(m[row][c]) < best)) {
                    piv = c;
                    best = abs(m[row][c]);
                }
            if (piv == cols) break;  // row is zero on the active columns
            colswap(piv, rank);
            bool clean = true;
            for (size_t c = rank + 1; c < cols; ++c) {
                if (m[row][c] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[row][c].get_mpz_t(), m[row][rank].get_mpz_t());
                coladd(c, rank, q);
                if (m[row][c] != 0) clean = false;
            }
            if (clean) { ++rank; break; }
        }
    }
    std::vector<std::vector<Int>> kernel;
    for (size_t c = rank; c < cols; ++c) {
        std::vector<Int> v(cols);
        for (size_t r = 0; r < cols; ++r) v[r] = u[r][c];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

struct SmithResult {
    ZMat u, d, v;  // u m v = d, with u and v unimodular
};

inline SmithResult smith_normal_form(ZMat m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    SmithResult res;
    res.u = zmat_identity(rows);
    res.v = zmat_identity(cols);
    auto rowop = [&](size_t dst, size_t src, const Int& q) {
        for (size_t c = 0; c < cols; ++c) m[dst][c] -= q * m[src][c];
        for (size_t c = 0; c < rows; ++c) res.u[dst][c] -= q * res.u[src][c];
    };
    auto colop = [&](size_t dst, size_t src, const Int& q) {
        for (size_t r = 0; r < rows; ++r) m[r][dst] -= q * m[r][src];
        for (size_t r = 0; r < cols; ++r) res.v[r][dst] -= q * res.v[r][src];
    };
    auto rowswap = [&](size_t i, size_t j) {
        std::swap(m[i], m[j]);
        std::swap(res.u[i], res.u[j]);
    };
    auto colswap = [&](size_t i, size_t j) {
        for (size_t r = 0; r < rows; ++r) std::swap(m[r][i], m[r][j]);
        for (size_t r = 0; r < cols; ++r) std::swap(res.v[r][i], res.v[r][j]);
    };
    size_t n = std::min(rows, cols);
    for (size_t k = 0; k < n; ++k) {
        for (;;) {
            // locate minimal nonzero pivot
            size_t pi = rows, pj = cols;
            Int best;
            for (size_t i = k; i < rows; ++i)
                for (size_t j = k; j < cols; ++j)
                    if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < best)) {
                        pi = i;
                        pj = j;
                        best = abs(m[i][j]);
                    }
            if (pi == rows) goto done;
            if (pi != k) rowswap(pi, k);
            if (pj != k) colswap(pj, k);
            bool clean = true;
            for (size_t i = k + 1; i < rows; ++i)
                if (m[i][k] != 0) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), m[i][k].get_mpz_t(), m[k][k].get_mpz_t());
                    rowop(i, k, q);
                    if (m[i][k] != 0) clean = false;
                }
            for (size_t j = k + 1; j < cols; ++j)
                if (m[k][j] != 0) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), m[k][j].get_mpz_t(), m[k][k].get_mpz_t());
                    colop(j, k, q);
                    if (m[k][j] != 0) clean = false;
                }
            if (!clean) continue;
            // divisibility sweep
            bool redo = false;
            for (size_t i = k + 1; i < rows && !redo; ++i)
                for (size_t j = k + 1; j < cols && !redo; ++j)
                    if (m[i][j] % m[k][k] != 0) {
                        rowop(k, i, Int(-1));  // add row i to row k
                        redo = true;
                    }
            if (!redo) break;
        }
        if (m[k][k] < 0) {
            for (size_t c = 0; c < cols; ++c) m[k][c] = -m[k][c];
            for (size_t c = 0; c < rows; ++c) res.u[k][c] = -res.u[k][c];
        }
    }
done:
    res.d = std::move(m);
    return res;
}

}  // namespace caplift
