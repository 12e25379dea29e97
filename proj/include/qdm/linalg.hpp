#pragma once

// Exact linear algebra over Z and Q at desk scale: echelon forms, kernels,
// solves. Matrices are plain row-major nested vectors.

#include "qdm/rational.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace qdm {

using IntVec = std::vector<long>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

namespace linalg {

inline RatMat to_rational(const IntMat& a) {
    RatMat out;
    out.reserve(a.size());
    for (const auto& row : a) {
        RatVec r;
        r.reserve(row.size());
        for (long x : row) r.emplace_back(x);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::size_t cols(const RatMat& a) { return a.empty() ? 0 : a.front().size(); }

/// In-place reduced row echelon form. Returns the pivot column of each
/// nonzero row; rows past the rank are left zero.
inline std::vector<std::size_t> rref(RatMat& a) {
    std::vector<std::size_t> pivots;
    const std::size_t m = a.size(), n = cols(a);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t p = row;
        while (p < m && sgn(a[p][c]) == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[row]);
        const Rational inv = 1 / a[row][c];
        for (std::size_t j = c; j < n; ++j) a[row][j] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || sgn(a[i][c]) == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t j = c; j < n; ++j)
                if (sgn(a[row][j]) != 0) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(RatMat a) { return rref(a).size(); }

/// Basis of {x : A x = 0}, one vector per free column (free entry = 1).
inline std::vector<RatVec> nullspace(RatMat a, std::size_t ncols) {
    for (auto& r : a) r.resize(ncols);
    auto pivots = rref(a);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        RatVec v(ncols);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Unique solution of A x = b for square nonsingular A, otherwise nullopt.
inline std::optional<RatVec> solve_square(const RatMat& a, const RatVec& b) {
    const std::size_t n = a.size();
    RatMat aug(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) return std::nullopt;
        aug[i] = a[i];
        aug[i].push_back(b[i]);
    }
    auto piv = rref(aug);
    if (piv.size() != n || piv.back() != n - 1) return std::nullopt;
    RatVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
    return x;
}

/// Any solution of the (possibly overdetermined) system A x = b; nullopt if
/// inconsistent. Free variables are set to zero.
inline std::optional<RatVec> solve(const RatMat& a, const RatVec& b, std::size_t ncols) {
    RatMat aug(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        aug[i] = a[i];
        aug[i].resize(ncols);
        aug[i].push_back(b[i]);
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == ncols) return std::nullopt;
    RatVec x(ncols);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][ncols];
    return x;
}

inline std::optional<RatMat> inverse(const RatMat& a) {
    const std::size_t n = a.size();
    RatMat aug(n);
    for (std::size_t i = 0; i < n; ++i) {
        aug[i] = a[i];
        aug[i].resize(2 * n);
        aug[i][n + i] = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RatMat inv(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

inline Rational determinant(RatMat a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0) continue;
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

inline long determinant(const IntMat& a) { return to_long(determinant(to_rational(a))); }

inline RatMat transpose(const RatMat& a) {
    RatMat t(cols(a), RatVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline RatMat multiply(const RatMat& a, const RatMat& b) {
    RatMat c(a.size(), RatVec(cols(b)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (sgn(a[i][k]) == 0) continue;
            for (std::size_t j = 0; j < cols(b); ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

/// Integer row reduction by Euclid steps. `a` becomes row echelon; `t`
/// (if given) accumulates the unimodular transform so that t_in * a_in = a_out.
/// Returns the rank.
inline std::size_t integer_echelon(IntMat& a, IntMat* t = nullptr) {
    const std::size_t m = a.size();
    const std::size_t n = a.empty() ? 0 : a.front().size();
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        if (t) std::swap((*t)[i], (*t)[j]);
    };
    auto add_rows = [&](std::size_t dst, std::size_t src, long f) {
        for (std::size_t j = 0; j < n; ++j) a[dst][j] -= f * a[src][j];
        if (t)
            for (std::size_t j = 0; j < t->front().size(); ++j) (*t)[dst][j] -= f * (*t)[src][j];
    };
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = row; i < m; ++i)
                if (a[i][c] != 0 && (best == m || std::labs(a[i][c]) < std::labs(a[best][c]))) best = i;
            if (best == m) break;
            swap_rows(row, best);
            bool done = true;
            for (std::size_t i = row + 1; i < m; ++i) {
                if (a[i][c] == 0) continue;
                add_rows(i, row, a[i][c] / a[row][c]);
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (row < m && a[row][c] != 0) {
            if (a[row][c] < 0) {
                for (auto& x : a[row]) x = -x;
                if (t)
                    for (auto& x : (*t)[row]) x = -x;
            }
            // Hermite reduction of the entries above the pivot.
            for (std::size_t i = 0; i < row; ++i) {
                long q = a[i][c] / a[row][c];
                if (a[i][c] - q * a[row][c] < 0) --q;
                if (q != 0) add_rows(i, row, q);
            }
            ++row;
        }
    }
    return row;
}

/// Saturated basis of {x in Z^n : A x = 0} in Hermite normal form.
inline IntMat integer_kernel(const IntMat& a, std::size_t n) {
    // Rows of a^T are indexed by x-coordinates; left kernel of a^T == kernel of a.
    IntMat at(n, IntVec(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) at[j][i] = a[i][j];
    IntMat t(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) t[i][i] = 1;
    const std::size_t r = a.empty() ? 0 : integer_echelon(at, &t);
    IntMat kernel(t.begin() + static_cast<long>(r), t.end());
    integer_echelon(kernel);
    return kernel;
}

inline long gcd_of(const IntVec& v) {
    long g = 0;
    for (long x : v) g = std::gcd(g, x);
    return g;
}

} // namespace linalg
} // namespace qdm
