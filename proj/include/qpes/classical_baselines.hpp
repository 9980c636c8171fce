/*
 * Copyright (c) 2026, the qpes contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <random>

#include "qpes/eig_oracle.hpp"

namespace qpes {

namespace detail {

inline std::vector<cplx> seeded_unit_vector(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    double nrm = 0.0;
    for (auto &x : v) {
        x = cplx{gauss(rng), gauss(rng)};
        nrm += std::norm(x);
    }
    nrm = std::sqrt(nrm);
    for (auto &x : v)
        x /= nrm;
    return v;
}

inline cplx dot(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

inline double nrm2(const std::vector<cplx> &a) {
    double s = 0.0;
    for (const auto &x : a)
        s += std::norm(x);
    return std::sqrt(s);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Power method with implicit deflation
// ---------------------------------------------------------------------------

struct PowerStage {
    double lambda = 0.0;
    std::vector<cplx> vector;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
    bool converged = false;
};

struct PowerResult {
    std::vector<PowerStage> stages; // in the order found (dominant first)
    bool all_converged = true;
};

/// Repeated sparse multiply + normalize from a seeded random start;
/// eigenvalue from the Rayleigh quotient. Converged pairs are deflated
/// implicitly during the multiply (y <- A y - sum lambda_i v_i <v_i, y>),
/// keeping the per-iteration cost at O(N s).
inline PowerResult power_method_topk(const SparseHermitian &a, std::size_t k, double tol,
                                     std::size_t max_iter, std::uint64_t seed) {
    require(k >= 1 && k <= a.dim(), "need 1 <= k <= N");
    require(tol > 0.0, "tolerance must be positive");
    const std::size_t n = a.dim();
    const double scale = std::max(a.max_abs(), 1e-300) * std::sqrt(static_cast<double>(n));
    std::mt19937_64 rng(seed);

    PowerResult result;
    std::vector<cplx> y(n), x;
    for (std::size_t stage = 0; stage < k; ++stage) {
        x = detail::seeded_unit_vector(n, rng);
        PowerStage st;
        double lambda_prev = std::numeric_limits<double>::infinity();
        for (std::size_t it = 1; it <= max_iter; ++it) {
            a.multiply(x.data(), y.data());
            for (const auto &found : result.stages) {
                const cplx coeff = found.lambda * detail::dot(found.vector, x);
                for (std::size_t i = 0; i < n; ++i)
                    y[i] -= coeff * found.vector[i];
            }
            const double lambda = std::real(detail::dot(x, y));
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                r2 += std::norm(y[i] - lambda * x[i]);
            const double residual = std::sqrt(r2);
            st.residual_history.push_back(residual);
            st.iterations = it;
            st.lambda = lambda;
            st.residual = residual;
            const double rel_change = std::abs(lambda - lambda_prev) / std::max(1.0, std::abs(lambda));
            lambda_prev = lambda;
            if (residual <= 1e-14 * scale || (residual <= tol * scale && rel_change <= tol)) {
                st.converged = true;
                break;
            }
            const double ynorm = detail::nrm2(y);
            if (ynorm <= 1e-300)
                break; // start vector annihilated; flagged below
            for (std::size_t i = 0; i < n; ++i)
                x[i] = y[i] / ynorm;
        }
        st.vector = x;
        result.all_converged = result.all_converged && st.converged;
        result.stages.push_back(std::move(st));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Lanczos with full reorthogonalization
// ---------------------------------------------------------------------------

struct LanczosResult {
    std::vector<double> diag;    // alpha, length = steps
    std::vector<double> offdiag; // beta, length = steps - 1
    std::size_t steps = 0;
    bool breakdown = false; // beta hit zero: exact invariant subspace found
    std::vector<double> ritz_values;            // descending
    std::vector<std::vector<cplx>> ritz_vectors; // column per Ritz value
    std::vector<double> ritz_residuals;          // ||A y - theta y||_2
    double model_cost_ops = 0.0;    // N*s per step, the textbook accounting
    double measured_cost_ops = 0.0; // including the O(N l^2) reorthogonalization
};

Spectrum qr_eigensolver(const DenseMatrix &dense);
std::pair<std::vector<double>, DenseMatrix>
qr_eigensolver_tridiagonal(std::vector<double> d, std::vector<double> e, bool want_vectors);

/// l-step Lanczos from a seeded random start. A breakdown (beta = 0) stops
/// early with an exact invariant subspace; that is a success, not an error.
inline LanczosResult lanczos_extremal(const SparseHermitian &a, std::size_t l,
                                      std::uint64_t seed) {
    const std::size_t n = a.dim();
    require(l >= 1 && l <= n, "Krylov dimension must satisfy 1 <= l <= N");
    std::mt19937_64 rng(seed);
    const double breakdown_tol = 1e-12 * std::max(1.0, a.max_abs()) *
                                 std::sqrt(static_cast<double>(n));

    LanczosResult res;
    std::vector<std::vector<cplx>> basis;
    basis.push_back(detail::seeded_unit_vector(n, rng));
    std::vector<cplx> w(n);
    const double nnz = static_cast<double>(a.stored_entries());

    for (std::size_t j = 0; j < l; ++j) {
        a.multiply(basis[j].data(), w.data());
        res.model_cost_ops += nnz;
        res.measured_cost_ops += nnz;
        const double alpha = std::real(detail::dot(basis[j], w));
        res.diag.push_back(alpha);
        for (std::size_t i = 0; i < n; ++i)
            w[i] -= alpha * basis[j][i];
        if (j > 0)
            for (std::size_t i = 0; i < n; ++i)
                w[i] -= res.offdiag[j - 1] * basis[j - 1][i];
        // two Gram-Schmidt passes against the whole basis
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &v : basis) {
                const cplx c = detail::dot(v, w);
                for (std::size_t i = 0; i < n; ++i)
                    w[i] -= c * v[i];
                res.measured_cost_ops += 2.0 * static_cast<double>(n);
            }
        res.steps = j + 1;
        if (j + 1 == l)
            break;
        const double beta = detail::nrm2(w);
        if (beta <= breakdown_tol) {
            res.breakdown = true;
            break;
        }
        res.offdiag.push_back(beta);
        auto &next = basis.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = w[i] / beta;
    }

    auto [theta, z] = qr_eigensolver_tridiagonal(res.diag, res.offdiag, true);
    res.ritz_values = std::move(theta);
    res.ritz_vectors.assign(res.ritz_values.size(), std::vector<cplx>(n, cplx{0.0, 0.0}));
    for (std::size_t col = 0; col < res.ritz_values.size(); ++col)
        for (std::size_t row = 0; row < res.steps; ++row) {
            const cplx zc = z(row, col);
            if (zc == cplx{0.0, 0.0})
                continue;
            for (std::size_t i = 0; i < n; ++i)
                res.ritz_vectors[col][i] += zc * basis[row][i];
        }
    res.ritz_residuals.resize(res.ritz_values.size());
    std::vector<cplx> ay(n);
    for (std::size_t col = 0; col < res.ritz_values.size(); ++col) {
        a.multiply(res.ritz_vectors[col].data(), ay.data());
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            r2 += std::norm(ay[i] - res.ritz_values[col] * res.ritz_vectors[col][i]);
        res.ritz_residuals[col] = std::sqrt(r2);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Symmetric/Hermitian QR: Householder tridiagonalization followed by
// implicit-shift QL iterations with Wilkinson shift. Independent of the
// Jacobi oracle so the two routes cross-validate.
// ---------------------------------------------------------------------------

/// Eigenvalues (descending) and accumulated transform of a real symmetric
/// tridiagonal matrix given by diagonal d and subdiagonal e.
inline std::pair<std::vector<double>, DenseMatrix>
qr_eigensolver_tridiagonal(std::vector<double> d, std::vector<double> e, bool want_vectors) {
    const std::size_t n = d.size();
    require(e.size() + 1 == n || (n == 1 && e.empty()), "tridiagonal sizes disagree");
    DenseMatrix z = want_vectors ? DenseMatrix::identity(n) : DenseMatrix(0);
    e.resize(n, 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    const std::size_t iter_cap = 30 * n;
    std::size_t iter = 0;

    for (std::size_t l = 0; l < n; ++l) {
        for (;;) {
            std::size_t m = l;
            while (m + 1 < n) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd)
                    break;
                ++m;
            }
            if (m == l)
                break;
            if (++iter > iter_cap)
                throw numerical_error("tridiagonal QR: iteration cap 30*dim exceeded");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                double f = s * e[ii];
                const double b = c * e[ii];
                r = std::hypot(f, g);
                e[ii + 1] = r;
                if (r == 0.0) {
                    d[ii + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                r = (d[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                d[ii + 1] = g + p;
                g = c * r - b;
                if (want_vectors)
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx zk = z(k, ii + 1);
                        z(k, ii + 1) = s * z(k, ii) + c * zk;
                        z(k, ii) = c * z(k, ii) - s * zk;
                    }
            }
            if (underflow)
                continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // descending order
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a_, std::size_t b_) { return d[a_] > d[b_]; });
    std::vector<double> dv(n);
    DenseMatrix zs = want_vectors ? DenseMatrix(n) : DenseMatrix(0);
    for (std::size_t j = 0; j < n; ++j) {
        dv[j] = d[order[j]];
        if (want_vectors)
            for (std::size_t i = 0; i < n; ++i)
                zs(i, j) = z(i, order[j]);
    }
    return {std::move(dv), std::move(zs)};
}

/// Full decomposition of a dense Hermitian matrix.
inline Spectrum qr_eigensolver(const DenseMatrix &dense) {
    const std::size_t n = dense.dim;
    require(n >= 1, "empty matrix");
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c)
            require(std::abs(dense(r, c) - std::conj(dense(c, r))) <= 1e-12,
                    "qr_eigensolver requires a Hermitian input");

    DenseMatrix a = dense;
    DenseMatrix q = DenseMatrix::identity(n);
    std::vector<cplx> wvec(n);

    // Householder reduction to Hermitian tridiagonal form
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double tail2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i)
            tail2 += std::norm(a(i, k));
        const double mu = std::sqrt(tail2);
        if (mu <= 1e-300)
            continue;
        const cplx alpha = a(k + 1, k);
        const cplx phase = std::abs(alpha) > 0.0 ? alpha / std::abs(alpha) : cplx{1.0, 0.0};
        double wnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            wvec[i] = a(i, k);
            if (i == k + 1)
                wvec[i] += phase * mu;
            wnorm2 += std::norm(wvec[i]);
        }
        if (wnorm2 <= 1e-300)
            continue;
        const double inv = 1.0 / std::sqrt(wnorm2);
        for (std::size_t i = k + 1; i < n; ++i)
            wvec[i] *= inv;
        // A <- H A, H = I - 2 w w^dag acting on rows k+1..n-1
        for (std::size_t c = 0; c < n; ++c) {
            cplx t{0.0, 0.0};
            for (std::size_t i = k + 1; i < n; ++i)
                t += std::conj(wvec[i]) * a(i, c);
            t *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i)
                a(i, c) -= t * wvec[i];
        }
        // A <- A H, Q <- Q H (columns k+1..n-1)
        for (std::size_t r = 0; r < n; ++r) {
            cplx t{0.0, 0.0};
            for (std::size_t i = k + 1; i < n; ++i)
                t += a(r, i) * wvec[i];
            t *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i)
                a(r, i) -= t * std::conj(wvec[i]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            cplx t{0.0, 0.0};
            for (std::size_t i = k + 1; i < n; ++i)
                t += q(r, i) * wvec[i];
            t *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i)
                q(r, i) -= t * std::conj(wvec[i]);
        }
    }

    // phase-rotate the subdiagonal onto the real axis
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    cplx u{1.0, 0.0};
    std::vector<cplx> column_phase(n, cplx{1.0, 0.0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx sub = a(i + 1, i);
        const double mag = std::abs(sub);
        const cplx ph = mag > 0.0 ? sub / mag : cplx{1.0, 0.0};
        u *= ph;
        column_phase[i + 1] = u;
        e[i] = mag;
    }
    for (std::size_t i = 0; i < n; ++i)
        d[i] = a(i, i).real();
    for (std::size_t c = 0; c < n; ++c)
        if (column_phase[c] != cplx{1.0, 0.0})
            for (std::size_t r = 0; r < n; ++r)
                q(r, c) *= column_phase[c];

    DenseMatrix zt;
    std::vector<double> vals;
    std::tie(vals, zt) = qr_eigensolver_tridiagonal(std::move(d), std::move(e), true);

    Spectrum s;
    s.eigenvalues = std::move(vals);
    s.basis = DenseMatrix(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                acc += q(r, i) * zt(i, c);
            s.basis(r, c) = acc;
        }
    s.source = Spectrum::Source::oracle;
    canonicalize(s);
    return s;
}

inline Spectrum qr_eigensolver(const SparseHermitian &a) {
    return qr_eigensolver(a.to_dense());
}

} // namespace qpes
