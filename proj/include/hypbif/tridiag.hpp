#pragma once

#include "hypbif/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypbif {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// General tridiagonal solve with partial pivoting (dgtsv).
// sub[i] = A(i+1,i), diag[i] = A(i,i), sup[i] = A(i,i+1).
template <class Scalar>
Vec<Scalar> solve_tridiagonal(Vec<Scalar> sub, Vec<Scalar> diag, Vec<Scalar> sup, Vec<Scalar> b)
{
    using std::abs;
    const Eigen::Index n = diag.size();
    if (n == 0)
        return b;
    Scalar scale = diag.cwiseAbs().maxCoeff();
    if (n > 1)
        scale = std::max({scale, sub.cwiseAbs().maxCoeff(), sup.cwiseAbs().maxCoeff()});
    const Scalar tiny = scale * std::numeric_limits<Scalar>::epsilon() * Scalar(1e-3);
    auto singular = []() {
        return Error(ErrorKind::Degeneracy, "tridiagonal system is singular");
    };
    if (n == 1) {
        if (abs(diag[0]) <= tiny)
            throw singular();
        b[0] /= diag[0];
        return b;
    }
    Vec<Scalar> du2 = Vec<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (abs(diag[i]) >= abs(sub[i])) {
            if (abs(diag[i]) <= tiny)
                throw singular();
            const Scalar fact = sub[i] / diag[i];
            diag[i + 1] -= fact * sup[i];
            b[i + 1] -= fact * b[i];
            du2[i] = Scalar(0);
        } else {
            const Scalar fact = diag[i] / sub[i];
            diag[i] = sub[i];
            const Scalar temp = diag[i + 1];
            diag[i + 1] = sup[i] - fact * temp;
            if (i + 2 < n) {
                du2[i] = sup[i + 1];
                sup[i + 1] = -fact * du2[i];
            }
            sup[i] = temp;
            const Scalar tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (abs(diag[n - 1]) <= tiny)
        throw singular();
    b[n - 1] /= diag[n - 1];
    b[n - 2] = (b[n - 2] - sup[n - 2] * b[n - 1]) / diag[n - 2];
    for (Eigen::Index j = n - 3; j >= 0; --j)
        b[j] = (b[j] - sup[j] * b[j + 1] - du2[j] * b[j + 2]) / diag[j];
    return b;
}

// Symmetric tridiagonal y = A x.
template <class Scalar>
Vec<Scalar> tridiagonal_apply(const Vec<Scalar>& diag, const Vec<Scalar>& off, const Vec<Scalar>& x)
{
    const Eigen::Index n = diag.size();
    Vec<Scalar> y = diag.cwiseProduct(x);
    if (n > 1) {
        y.head(n - 1) += off.cwiseProduct(x.tail(n - 1));
        y.tail(n - 1) += off.cwiseProduct(x.head(n - 1));
    }
    return y;
}

// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x.
template <class Scalar>
int sturm_count(const Vec<Scalar>& diag, const Vec<Scalar>& off, Scalar x)
{
    using std::abs;
    const Eigen::Index n = diag.size();
    const Scalar pivmin = std::numeric_limits<Scalar>::min() * Scalar(1e4);
    int count = 0;
    Scalar q = diag[0] - x;
    if (abs(q) < pivmin)
        q = -pivmin;
    if (q < 0)
        ++count;
    for (Eigen::Index i = 1; i < n; ++i) {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if (abs(q) < pivmin)
            q = -pivmin;
        if (q < 0)
            ++count;
    }
    return count;
}

template <class Scalar>
std::pair<Scalar, Scalar> gershgorin_bounds(const Vec<Scalar>& diag, const Vec<Scalar>& off)
{
    using std::abs;
    const Eigen::Index n = diag.size();
    Scalar lo = std::numeric_limits<Scalar>::max(), hi = std::numeric_limits<Scalar>::lowest();
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar rad = 0;
        if (i > 0)
            rad += abs(off[i - 1]);
        if (i + 1 < n)
            rad += abs(off[i]);
        lo = std::min(lo, diag[i] - rad);
        hi = std::max(hi, diag[i] + rad);
    }
    return {lo, hi};
}

// k-th smallest eigenvalue (0-based) by Sturm bisection.
template <class Scalar>
Scalar tridiagonal_eigenvalue(const Vec<Scalar>& diag, const Vec<Scalar>& off, int k,
                              Scalar lo, Scalar hi, Scalar rel_tol = Scalar(1e-15))
{
    using std::abs;
    for (int it = 0; it < 200; ++it) {
        const Scalar mid = Scalar(0.5) * (lo + hi);
        if (hi - lo <= rel_tol * std::max(Scalar(1), abs(mid)) || mid == lo || mid == hi)
            break;
        if (sturm_count(diag, off, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return Scalar(0.5) * (lo + hi);
}

template <class Scalar>
Vec<Scalar> tridiagonal_eigenvalues(const Vec<Scalar>& diag, const Vec<Scalar>& off, int count,
                                    Scalar rel_tol = Scalar(1e-15))
{
    auto [lo, hi] = gershgorin_bounds(diag, off);
    Vec<Scalar> ev(count);
    for (int k = 0; k < count; ++k)
        ev[k] = tridiagonal_eigenvalue(diag, off, k, lo, hi, rel_tol);
    return ev;
}

// Unit eigenvector for an accurately known eigenvalue.
template <class Scalar>
Vec<Scalar> inverse_iteration(const Vec<Scalar>& diag, const Vec<Scalar>& off, Scalar eigenvalue,
                              int iterations = 3)
{
    using std::abs;
    const Eigen::Index n = diag.size();
    auto [lo, hi] = gershgorin_bounds(diag, off);
    const Scalar shift = eigenvalue + Scalar(64) * std::numeric_limits<Scalar>::epsilon()
                                          * std::max(abs(lo), abs(hi));
    Vec<Scalar> d = diag.array() - shift;
    Vec<Scalar> x = Vec<Scalar>::Ones(n) / std::sqrt(Scalar(n));
    for (int it = 0; it < iterations; ++it) {
        x = solve_tridiagonal<Scalar>(off, d, off, x);
        x.normalize();
    }
    return x;
}

// Eigenvector from forward and backward ratio recurrences joined at the peak of the
// inverse-iteration vector; keeps componentwise accuracy in exponentially small tails.
template <class Scalar>
Vec<Scalar> twisted_eigenvector(const Vec<Scalar>& diag, const Vec<Scalar>& off, Scalar eigenvalue)
{
    using std::abs;
    const Eigen::Index n = diag.size();
    Vec<Scalar> v = inverse_iteration(diag, off, eigenvalue);
    if (n < 3)
        return v;
    Eigen::Index k;
    v.cwiseAbs().maxCoeff(&k);
    Vec<Scalar> x(n);
    x[k] = Scalar(1);
    Scalar q = -(diag[0] - eigenvalue) / off[0];
    Vec<Scalar> fwd(n);
    fwd[0] = q;
    for (Eigen::Index i = 1; i < k; ++i) {
        q = -((diag[i] - eigenvalue) + off[i - 1] / q) / off[i];
        fwd[i] = q;
    }
    for (Eigen::Index i = k - 1; i >= 0; --i)
        x[i] = x[i + 1] / fwd[i];
    Scalar s = -(diag[n - 1] - eigenvalue) / off[n - 2];
    Vec<Scalar> bwd(n);
    bwd[n - 1] = s;
    for (Eigen::Index i = n - 2; i > k; --i) {
        s = -((diag[i] - eigenvalue) + off[i] / s) / off[i - 1];
        bwd[i] = s;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
        x[i] = x[i - 1] / bwd[i];
    if (!x.allFinite())
        return v;
    x.normalize();
    if (x.dot(v) < Scalar(0))
        x = -x;
    return x;
}

}  // namespace hypbif
