#pragma once
// Small dense complex linear algebra: LU solve/determinant, Householder QR
// least squares, and numerical rank.  Sizes here are tiny (2n <= 8), so a
// straightforward O(n^3) implementation is the right tool.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "joycekit/types.hpp"

namespace joycekit::linalg {

inline cmat matmul(const cmat& a, const cmat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    cmat c = zeros(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            const cplx aip = a[i][p];
            if (aip == cplx(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += aip * b[p][j];
        }
    return c;
}

inline cmat transpose(const cmat& a) {
    if (a.empty()) return {};
    cmat t = zeros(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline cvec matvec(const cmat& a, const cvec& x) {
    cvec y(a.size(), cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

struct LU {
    cmat lu;                 // packed factors
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

inline LU lu_factor(cmat a) {
    const std::size_t n = a.size();
    LU f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a[k][k]);
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > best) { best = std::abs(a[i][k]); piv = i; }
        if (best == 0.0) { f.singular = true; f.lu = std::move(a); return f; }
        if (piv != k) {
            std::swap(a[piv], a[k]);
            std::swap(f.perm[piv], f.perm[k]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a[i][k] /= a[k][k];
            const cplx lik = a[i][k];
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= lik * a[k][j];
        }
    }
    f.lu = std::move(a);
    return f;
}

inline cplx lu_det(const LU& f) {
    if (f.singular) return cplx(0.0);
    cplx d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < f.lu.size(); ++i) d *= f.lu[i][i];
    return d;
}

inline cvec lu_solve(const LU& f, const cvec& b) {
    if (f.singular) throw std::runtime_error("lu_solve: singular matrix");
    const std::size_t n = f.lu.size();
    cvec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu[i][j] * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu[i][j] * x[j];
        x[i] /= f.lu[i][i];
    }
    return x;
}

inline cplx det(const cmat& a) { return lu_det(lu_factor(a)); }

inline cvec solve(const cmat& a, const cvec& b) { return lu_solve(lu_factor(a), b); }

inline cmat inverse(const cmat& a) {
    const std::size_t n = a.size();
    LU f = lu_factor(a);
    cmat inv = zeros(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        cvec e(n, cplx(0.0));
        e[j] = 1.0;
        cvec col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

// Householder QR of an m x k matrix (m >= k).  Used for least squares and
// rank estimation.  Returns R stacked in-place and accumulates Q^H b.
struct QR {
    cmat r;          // upper-triangular k x k block significant
    cvec qtb;        // Q^H b (length m)
    std::size_t m = 0, k = 0;
};

inline QR qr_factor(cmat a, cvec b) {
    const std::size_t m = a.size(), k = a.empty() ? 0 : a[0].size();
    for (std::size_t col = 0; col < k; ++col) {
        double norm = 0.0;
        for (std::size_t i = col; i < m; ++i) norm += std::norm(a[i][col]);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        // Householder vector v = x + sign * norm * e1 with complex phase
        cplx x0 = a[col][col];
        cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
        cplx alpha = -phase * norm;
        cvec v(m - col);
        v[0] = x0 - alpha;
        for (std::size_t i = col + 1; i < m; ++i) v[i - col] = a[i][col];
        double vnorm2 = 0.0;
        for (const auto& vi : v) vnorm2 += std::norm(vi);
        if (vnorm2 == 0.0) continue;
        // apply H = I - 2 v v^H / |v|^2 to trailing columns and to b
        for (std::size_t j = col; j < k; ++j) {
            cplx dot(0.0);
            for (std::size_t i = col; i < m; ++i) dot += std::conj(v[i - col]) * a[i][j];
            dot *= 2.0 / vnorm2;
            for (std::size_t i = col; i < m; ++i) a[i][j] -= dot * v[i - col];
        }
        cplx dotb(0.0);
        for (std::size_t i = col; i < m; ++i) dotb += std::conj(v[i - col]) * b[i];
        dotb *= 2.0 / vnorm2;
        for (std::size_t i = col; i < m; ++i) b[i] -= dotb * v[i - col];
        a[col][col] = alpha;
        for (std::size_t i = col + 1; i < m; ++i) a[i][col] = 0.0;
    }
    return QR{std::move(a), std::move(b), m, k};
}

// Least-squares solve min |A x - b|; returns pair (x, residual_norm).
inline std::pair<cvec, double> lstsq(const cmat& a, const cvec& b) {
    QR f = qr_factor(a, b);
    cvec x(f.k, cplx(0.0));
    for (std::size_t i = f.k; i-- > 0;) {
        cplx s = f.qtb[i];
        for (std::size_t j = i + 1; j < f.k; ++j) s -= f.r[i][j] * x[j];
        if (std::abs(f.r[i][i]) == 0.0)
            x[i] = 0.0; // rank-deficient column: minimal-norm-ish fallback
        else
            x[i] = s / f.r[i][i];
    }
    double res = 0.0;
    for (std::size_t i = f.k; i < f.m; ++i) res += std::norm(f.qtb[i]);
    // rank-deficient rows inside the triangle also contribute
    for (std::size_t i = 0; i < f.k; ++i) {
        if (std::abs(f.r[i][i]) == 0.0) {
            cplx s = f.qtb[i];
            for (std::size_t j = i + 1; j < f.k; ++j) s -= f.r[i][j] * x[j];
            res += std::norm(s);
        }
    }
    return {x, std::sqrt(res)};
}

// Numerical rank relative to the largest diagonal of R.
inline std::size_t rank(const cmat& a, double rel_tol = 1e-10) {
    if (a.empty()) return 0;
    QR f = qr_factor(a, cvec(a.size(), cplx(0.0)));
    double big = 0.0;
    for (std::size_t i = 0; i < f.k && i < f.m; ++i)
        big = std::max(big, std::abs(f.r[i][i]));
    if (big == 0.0) return 0;
    std::size_t r = 0;
    for (std::size_t i = 0; i < f.k && i < f.m; ++i)
        if (std::abs(f.r[i][i]) > rel_tol * big) ++r;
    return r;
}

} // namespace joycekit::linalg
