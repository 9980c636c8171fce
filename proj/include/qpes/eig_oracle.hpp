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

#include "qpes/spectrum.hpp"

namespace qpes {

/// Ground-truth dense eigensolver: cyclic Jacobi with complex rotations.
/// Deliberately a different algorithm family than the Householder +
/// implicit-shift QR in classical_baselines.hpp, so the two can
/// cross-validate each other.
inline Spectrum jacobi_hermitian(DenseMatrix a) {
    const std::size_t n = a.dim;
    DenseMatrix v = DenseMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    s += std::norm(a(i, j));
        return std::sqrt(s);
    };
    double fro = 0.0;
    for (const auto &x : a.a)
        fro += std::norm(x);
    fro = std::sqrt(fro);
    const double stop = std::max(1e-300, 1e-15 * fro);

    const int max_sweeps = 60;
    int sweep = 0;
    while (off_norm() > stop) {
        if (++sweep > max_sweeps)
            throw numerical_error("jacobi_hermitian: no convergence in 60 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double absg = std::abs(g);
                if (absg < 1e-300)
                    continue;
                const cplx u = g / absg; // pivot phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * absg);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx su = s * u;
                const cplx suc = s * std::conj(u);

                // A <- J^dag A J with J acting on coordinates (p, q):
                // J = [[c, s*u], [-s*conj(u), c]]
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - suc * arq;
                    a(r, q) = su * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr - su * aqr;
                    a(q, r) = suc * apr + c * aqr;
                }
                a(p, q) = cplx{0.0, 0.0};
                a(q, p) = cplx{0.0, 0.0};
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - suc * vrq;
                    v(r, q) = su * vrp + c * vrq;
                }
            }
        }
    }

    Spectrum s;
    s.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.eigenvalues[i] = a(i, i).real();
    s.basis = std::move(v);
    s.source = Spectrum::Source::oracle;
    canonicalize(s);
    return s;
}

/// Full decomposition of a sparse Hermitian input (densified; desk scale).
inline Spectrum eig_oracle(const SparseHermitian &a) {
    require(a.dim() <= 4096, "eig_oracle: dimension capped at 4096");
    return jacobi_hermitian(a.to_dense());
}

} // namespace qpes
