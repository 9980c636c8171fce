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

#include "qpes/eig_oracle.hpp"
#include "qpes/phase_map.hpp"

namespace qpes {

enum class BasisKind {
    seeded,   // Haar-ish random unitary from basis_seed
    identity, // diagonal matrix
    fourier,  // DFT columns: |v_uj|^2 = 1/N exactly for every u, j
};

/// Builds A = Q diag(eigs) Q^dag together with its exact decomposition.
/// The returned Spectrum carries the requested eigenvalues verbatim
/// (source = synthetic), so callers can test against a leak-free ground
/// truth instead of a recomputed one.
inline std::pair<SparseHermitian, Spectrum>
synthesize_with_spectrum(const std::vector<double> &eigs, std::uint64_t basis_seed,
                         BasisKind basis = BasisKind::seeded) {
    const std::size_t n = eigs.size();
    require(n >= 1, "need at least one eigenvalue");
    DenseMatrix q;
    switch (basis) {
    case BasisKind::seeded:
        q = random_unitary(n, basis_seed);
        break;
    case BasisKind::identity:
        q = DenseMatrix::identity(n);
        break;
    case BasisKind::fourier:
        q = fourier_unitary(n);
        break;
    }
    DenseMatrix a(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j)
                acc += q(r, j) * eigs[j] * std::conj(q(c, j));
            a(r, c) = acc;
        }

    Spectrum s;
    s.eigenvalues = eigs;
    s.basis = std::move(q);
    s.source = Spectrum::Source::synthetic;
    canonicalize(s);
    return {SparseHermitian::from_dense(a), std::move(s)};
}

/// Test-matrix factory with a prescribed on-grid eigenphase multiset:
/// eigenvalues are f_inv(2 pi phi_j / 2^m), so QPE with m bits resolves the
/// spectrum without leakage.
inline std::pair<SparseHermitian, Spectrum>
synthesize_on_grid(int n, int m, const PhaseMap &phase_map,
                   const std::vector<std::uint64_t> &grid_phases, std::uint64_t basis_seed,
                   BasisKind basis = BasisKind::seeded) {
    require(m == phase_map.m, "phase map bit count disagrees with m");
    require(!grid_phases.empty(), "need at least one grid phase");
    require(grid_phases.size() <= (std::size_t{1} << n),
            "more phases than the n-qubit register can hold");
    std::vector<double> eigs;
    eigs.reserve(grid_phases.size());
    for (std::uint64_t phi : grid_phases) {
        if (!phase_map.on_invertible_grid(phi))
            throw validation_error("grid phase " + std::to_string(phi) +
                                   " outside the invertible range of f_inv");
        eigs.push_back(phase_map.lambda_at(phi));
    }
    return synthesize_with_spectrum(eigs, basis_seed, basis);
}

} // namespace qpes
