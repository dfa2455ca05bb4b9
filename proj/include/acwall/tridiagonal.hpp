#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

// Symmetric tridiagonal kernels, templated on the scalar type so the same code
// runs in double, long double, and multiprecision.

namespace acwall::tri {

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
template <class Real>
std::size_t sturm_count(const std::vector<Real>& diag, const std::vector<Real>& off, const Real& x) {
    using std::abs;
    const std::size_t n = diag.size();
    const Real tiny = std::numeric_limits<Real>::min() * Real(1e10);
    std::size_t count = 0;
    Real q = diag[0] - x;
    if (abs(q) < tiny) q = -tiny;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (abs(q) < tiny) q = -tiny;
        if (q < 0) ++count;
    }
    return count;
}

template <class Real>
void gershgorin(const std::vector<Real>& diag, const std::vector<Real>& off, Real& lo, Real& hi) {
    using std::abs;
    const std::size_t n = diag.size();
    lo = diag[0];
    hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        Real r = 0;
        if (i > 0) r += abs(off[i - 1]);
        if (i + 1 < n) r += abs(off[i]);
        lo = std::min<Real>(lo, diag[i] - r);
        hi = std::max<Real>(hi, diag[i] + r);
    }
}

/// k-th smallest eigenvalue (0-based) by bisection inside [lo, hi]; the
/// interval must contain it. Iterates until the bracket stops shrinking.
template <class Real>
Real bisect_eigenvalue(const std::vector<Real>& diag, const std::vector<Real>& off, std::size_t k, Real lo, Real hi) {
    for (int it = 0; it < 4096; ++it) {
        const Real mid = (lo + hi) / 2;
        if (!(mid > lo && mid < hi)) break;
        if (sturm_count(diag, off, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return (lo + hi) / 2;
}

/// LU factorisation with partial pivoting of a general tridiagonal matrix
/// (LAPACK gttrf layout). Zero pivots are nudged so that nearly singular
/// shifted systems, as used by inverse iteration, still factor.
template <class Real>
struct TridiagonalLU {
    std::vector<Real> dl, d, du, du2;
    std::vector<unsigned char> swapped;

    TridiagonalLU(std::vector<Real> lower, std::vector<Real> diag, std::vector<Real> upper)
        : dl(std::move(lower)), d(std::move(diag)), du(std::move(upper)) {
        using std::abs;
        const std::size_t n = d.size();
        du2.assign(n > 2 ? n - 2 : 0, Real(0));
        swapped.assign(n > 0 ? n - 1 : 0, 0);
        Real scale = 0;
        for (const auto& v : d) scale = std::max<Real>(scale, abs(v));
        const Real floor = std::max<Real>(scale, Real(1)) * std::numeric_limits<Real>::epsilon();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (abs(d[i]) >= abs(dl[i])) {
                if (abs(d[i]) < floor) d[i] = floor;
                const Real fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const Real fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const Real tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        if (n > 0 && abs(d[n - 1]) < floor) d[n - 1] = floor;
    }

    void solve(std::vector<Real>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const Real tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }
};

/// Factorisation of the symmetric matrix (diag - shift, off).
template <class Real>
TridiagonalLU<Real> factor_shifted(const std::vector<Real>& diag, const std::vector<Real>& off, const Real& shift) {
    std::vector<Real> d(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) d[i] = diag[i] - shift;
    return TridiagonalLU<Real>(off, std::move(d), off);
}

/// Thomas algorithm for a symmetric, diagonally dominant system; overwrites rhs.
template <class Real>
void thomas_solve(const std::vector<Real>& diag, const std::vector<Real>& off, std::vector<Real>& rhs,
                  std::vector<Real>& work) {
    const std::size_t n = diag.size();
    work.resize(n);
    Real denom = diag[0];
    work[0] = n > 1 ? off[0] / denom : Real(0);
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - off[i - 1] * work[i - 1];
        if (i + 1 < n) work[i] = off[i] / denom;
        rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i] * rhs[i + 1];
}

/// y = A x for the symmetric tridiagonal (diag, off).
template <class Real>
void multiply(const std::vector<Real>& diag, const std::vector<Real>& off, const std::vector<Real>& x,
              std::vector<Real>& y) {
    const std::size_t n = diag.size();
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real s = diag[i] * x[i];
        if (i > 0) s += off[i - 1] * x[i - 1];
        if (i + 1 < n) s += off[i] * x[i + 1];
        y[i] = s;
    }
}

}  // namespace acwall::tri
