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

#include <algorithm>
#include <random>

#include "qpes/common.hpp"

namespace qpes {

/// Dense complex square matrix, row-major.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<cplx> a;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t d) : dim(d), a(d * d, cplx{0.0, 0.0}) {}

    cplx &operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static DenseMatrix identity(std::size_t d) {
        DenseMatrix m(d);
        for (std::size_t i = 0; i < d; ++i)
            m(i, i) = 1.0;
        return m;
    }
};

inline DenseMatrix adjoint(const DenseMatrix &m) {
    DenseMatrix r(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j)
            r(j, i) = std::conj(m(i, j));
    return r;
}

inline DenseMatrix mat_mul(const DenseMatrix &x, const DenseMatrix &y) {
    require(x.dim == y.dim, "mat_mul: dimension mismatch");
    const std::size_t d = x.dim;
    DenseMatrix r(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{0.0, 0.0})
                continue;
            const cplx *yr = &y.a[k * d];
            cplx *rr = &r.a[i * d];
            for (std::size_t j = 0; j < d; ++j)
                rr[j] += xik * yr[j];
        }
    }
    return r;
}

inline void mat_vec(const DenseMatrix &m, const cplx *x, cplx *y) {
    const std::size_t d = m.dim;
    for (std::size_t i = 0; i < d; ++i) {
        const cplx *row = &m.a[i * d];
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < d; ++j)
            acc += row[j] * x[j];
        y[i] = acc;
    }
}

/// max |(U^dag U - I)_{ij}|
inline double unitarity_defect(const DenseMatrix &u) {
    const DenseMatrix p = mat_mul(adjoint(u), u);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.dim; ++i)
        for (std::size_t j = 0; j < p.dim; ++j) {
            const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(p(i, j) - want));
        }
    return worst;
}

inline bool is_unitary(const DenseMatrix &u, double tol = 1e-12) {
    return unitarity_defect(u) <= tol;
}

/// Haar-ish random unitary: Gram-Schmidt (with one re-orthogonalization pass)
/// of a seeded complex Gaussian matrix. Deterministic per seed.
inline DenseMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    DenseMatrix q(dim);
    std::vector<cplx> col(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < dim; ++i)
            col[i] = cplx{gauss(rng), gauss(rng)};
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                cplx dot{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i)
                    dot += std::conj(q(i, p)) * col[i];
                for (std::size_t i = 0; i < dim; ++i)
                    col[i] -= dot * q(i, p);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            nrm += std::norm(col[i]);
        nrm = std::sqrt(nrm);
        require(nrm > 1e-12, "random_unitary: degenerate column");
        for (std::size_t i = 0; i < dim; ++i)
            q(i, c) = col[i] / nrm;
    }
    return q;
}

/// DFT basis: F(r,c) = exp(2*pi*i*r*c/dim)/sqrt(dim). Columns have uniform
/// component magnitude 1/sqrt(dim), handy for balanced-weight fixtures.
inline DenseMatrix fourier_unitary(std::size_t dim) {
    DenseMatrix f(dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            const double ang = 2.0 * kPi * static_cast<double>(r) *
                               static_cast<double>(c) / static_cast<double>(dim);
            f(r, c) = cplx{s * std::cos(ang), s * std::sin(ang)};
        }
    return f;
}

} // namespace qpes
