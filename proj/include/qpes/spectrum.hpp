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

#include "qpes/dense_matrix.hpp"
#include "qpes/sparse_hermitian.hpp"

namespace qpes {

/// Full spectral decomposition. eigenvalues[j] pairs with basis column j;
/// eigenvalues sorted descending, vector phases fixed so the first component
/// above 1e-12 in modulus is positive real.
struct Spectrum {
    enum class Source { oracle, synthetic };

    std::vector<double> eigenvalues;
    DenseMatrix basis; // column j = eigenvector j
    Source source = Source::oracle;

    std::size_t dim() const { return eigenvalues.size(); }

    /// component u of eigenvector j
    cplx component(std::size_t u, std::size_t j) const { return basis(u, j); }
};

/// Sorts eigenpairs by descending eigenvalue (stable) and normalizes each
/// vector's global phase.
inline void canonicalize(Spectrum &s) {
    const std::size_t n = s.dim();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.eigenvalues[a] > s.eigenvalues[b];
    });
    std::vector<double> ev(n);
    DenseMatrix basis(n);
    for (std::size_t j = 0; j < n; ++j) {
        ev[j] = s.eigenvalues[order[j]];
        for (std::size_t i = 0; i < n; ++i)
            basis(i, j) = s.basis(i, order[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx x = basis(i, j);
            if (std::abs(x) > 1e-12) {
                const cplx phase = std::conj(x) / std::abs(x);
                for (std::size_t r = 0; r < n; ++r)
                    basis(r, j) *= phase;
                break;
            }
        }
    }
    s.eigenvalues = std::move(ev);
    s.basis = std::move(basis);
}

/// max_j ||A v_j - lambda_j v_j||_2
inline double max_residual(const SparseHermitian &a, const Spectrum &s) {
    const std::size_t n = a.dim();
    std::vector<cplx> v(n), av(n);
    double worst = 0.0;
    for (std::size_t j = 0; j < s.dim(); ++j) {
        for (std::size_t i = 0; i < n; ++i)
            v[i] = s.basis(i, j);
        a.multiply(v.data(), av.data());
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            r2 += std::norm(av[i] - s.eigenvalues[j] * v[i]);
        worst = std::max(worst, std::sqrt(r2));
    }
    return worst;
}

/// max_{ij} |<v_i, v_j> - delta_ij|
inline double orthonormality_defect(const Spectrum &s) {
    const std::size_t n = s.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            cplx dot{0.0, 0.0};
            for (std::size_t r = 0; r < n; ++r)
                dot += std::conj(s.basis(r, i)) * s.basis(r, j);
            const cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(dot - want));
        }
    return worst;
}

/// max entry of |Q diag(lambda) Q^dag - A|
inline double reconstruction_defect(const SparseHermitian &a, const Spectrum &s) {
    const std::size_t n = a.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                acc += s.basis(r, j) * s.eigenvalues[j] * std::conj(s.basis(c, j));
            worst = std::max(worst, std::abs(acc - a.at(r, c)));
        }
    return worst;
}

} // namespace qpes
