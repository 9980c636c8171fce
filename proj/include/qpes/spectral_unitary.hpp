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
#include "qpes/quantum_state.hpp"

namespace qpes {

/// Unitary whose eigenphases encode the input spectrum through a PhaseMap.
///
/// exponential: U|v_j> = e^{i f(lambda_j)}|v_j> on the n-qubit register.
/// walk: one extra flag qubit; U|mu_pm(j)> = e^{+-i f(lambda_j)}|mu_pm(j)>
///       with mu_pm(j) = (|0>|v_j> -+ i|1>|v_j>)/sqrt(2), so a flag-cleared
///       input |0>|v_j> splits evenly over the +- eigenphase branches.
///
/// Dimensions the spectrum does not reach (N < 2^n) act as eigenvalue-0
/// directions; they carry no amplitude when the prepared basis index u < N.
struct SpectralUnitary {
    PhaseMap::Kind kind = PhaseMap::Kind::exponential;
    int block_qubits = 1; // n, +1 for the walk flag
    DenseMatrix u;
    std::vector<std::vector<cplx>> mu_plus;  // walk only, column j
    std::vector<std::vector<cplx>> mu_minus; // walk only
};

inline SpectralUnitary build_spectral_unitary(const Spectrum &spectrum,
                                              const PhaseMap &map, int n) {
    const std::size_t nvec = spectrum.dim();
    require(nvec <= (std::size_t{1} << n), "spectrum does not fit the system register");
    for (double lam : spectrum.eigenvalues)
        if (!map.admits(lam))
            throw validation_error("eigenvalue " + format_double(lam) +
                                   " violates the spectral bound alpha");

    const std::size_t sys_dim = std::size_t{1} << n;
    // P = sum_j |v_j><v_j| on the system register
    DenseMatrix proj(sys_dim);
    for (std::size_t r = 0; r < nvec; ++r)
        for (std::size_t c = 0; c < nvec; ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < nvec; ++j)
                acc += spectrum.basis(r, j) * std::conj(spectrum.basis(c, j));
            proj(r, c) = acc;
        }

    SpectralUnitary su;
    su.kind = map.kind;
    const double f0 = map.f(0.0);

    if (map.kind == PhaseMap::Kind::exponential) {
        su.block_qubits = n;
        DenseMatrix u(sys_dim);
        const cplx e0{std::cos(f0), std::sin(f0)};
        for (std::size_t r = 0; r < sys_dim; ++r)
            for (std::size_t c = 0; c < sys_dim; ++c) {
                const cplx p = (r < nvec && c < nvec) ? proj(r, c) : cplx{0.0, 0.0};
                const cplx id = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
                u(r, c) = e0 * (id - p);
            }
        for (std::size_t j = 0; j < nvec; ++j) {
            const double fj = map.f(spectrum.eigenvalues[j]);
            const cplx ph{std::cos(fj), std::sin(fj)};
            for (std::size_t r = 0; r < nvec; ++r)
                for (std::size_t c = 0; c < nvec; ++c)
                    u(r, c) += ph * spectrum.basis(r, j) * std::conj(spectrum.basis(c, j));
        }
        su.u = std::move(u);
        return su;
    }

    // walk model on (flag, system); block index = flag*2^n + sys
    su.block_qubits = n + 1;
    const std::size_t dim = sys_dim * 2;
    DenseMatrix u(dim);
    // complement rotates by f(0) in the flag plane: R = [[cos, -sin],[sin, cos]]
    const double c0 = std::cos(f0), s0 = std::sin(f0);
    for (std::size_t r = 0; r < sys_dim; ++r)
        for (std::size_t c = 0; c < sys_dim; ++c) {
            const cplx p = (r < nvec && c < nvec) ? proj(r, c) : cplx{0.0, 0.0};
            const cplx comp = ((r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - p;
            u(r, c) += c0 * comp;
            u(r, c + sys_dim) += -s0 * comp;
            u(r + sys_dim, c) += s0 * comp;
            u(r + sys_dim, c + sys_dim) += c0 * comp;
        }
    su.mu_plus.resize(nvec);
    su.mu_minus.resize(nvec);
    const cplx minus_i{0.0, -1.0}, plus_i{0.0, 1.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < nvec; ++j) {
        auto &mp = su.mu_plus[j];
        auto &mm = su.mu_minus[j];
        mp.assign(dim, cplx{0.0, 0.0});
        mm.assign(dim, cplx{0.0, 0.0});
        for (std::size_t r = 0; r < nvec; ++r) {
            const cplx v = spectrum.basis(r, j) * inv_sqrt2;
            mp[r] = v;
            mp[r + sys_dim] = minus_i * v;
            mm[r] = v;
            mm[r + sys_dim] = plus_i * v;
        }
        const double fj = map.f(spectrum.eigenvalues[j]);
        const cplx ep{std::cos(fj), std::sin(fj)};
        const cplx em = std::conj(ep);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                u(r, c) += ep * mp[r] * std::conj(mp[c]) + em * mm[r] * std::conj(mm[c]);
    }
    su.u = std::move(u);
    return su;
}

// ---------------------------------------------------------------------------
// Quantum Fourier transform on the phase register, gate by gate.
// Convention: QFT|x> = 2^{-m/2} sum_y e^{2 pi i x y / 2^m} |y>, register value
// little-endian over the given qubit list.
// ---------------------------------------------------------------------------

inline void apply_qft(QuantumState &state, const std::vector<int> &q) {
    const int m = static_cast<int>(q.size());
    for (int k = m - 1; k >= 0; --k) {
        apply_hadamard(state, q[k]);
        for (int l = k - 1; l >= 0; --l)
            apply_controlled_phase(state, q[l], q[k], kPi / static_cast<double>(1ULL << (k - l)));
    }
    for (int k = 0; k < m / 2; ++k)
        apply_swap(state, q[k], q[m - 1 - k]);
}

inline void apply_inverse_qft(QuantumState &state, const std::vector<int> &q) {
    const int m = static_cast<int>(q.size());
    for (int k = 0; k < m / 2; ++k)
        apply_swap(state, q[k], q[m - 1 - k]);
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < k; ++l)
            apply_controlled_phase(state, q[l], q[k], -kPi / static_cast<double>(1ULL << (k - l)));
        apply_hadamard(state, q[k]);
    }
}

// ---------------------------------------------------------------------------
// Complete eigenpair solver: basis-state preparation + QPE. The context
// caches the controlled powers V^(2^t) so the AA loop can replay the solver
// and its inverse cheaply.
// ---------------------------------------------------------------------------

struct CesContext {
    RegisterLayout layout;
    PhaseMap map;
    Spectrum spectrum;
    SpectralUnitary v;
    std::vector<DenseMatrix> powers;     // V^(2^t), t = 0..m-1
    std::vector<DenseMatrix> powers_adj; // conjugate transposes
};

inline int qubits_for(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim)
        ++n;
    return std::max(1, n);
}

inline CesContext make_ces(Spectrum spectrum, const PhaseMap &map) {
    CesContext ctx;
    ctx.layout.n = qubits_for(spectrum.dim());
    ctx.layout.m = map.m;
    ctx.layout.walk_flag = map.kind == PhaseMap::Kind::walk;
    ctx.map = map;
    ctx.v = build_spectral_unitary(spectrum, map, ctx.layout.n);
    ctx.spectrum = std::move(spectrum);
    require(is_unitary(ctx.v.u, 1e-10), "spectral unitary failed the unitarity check");
    ctx.powers.reserve(map.m);
    ctx.powers_adj.reserve(map.m);
    ctx.powers.push_back(ctx.v.u);
    for (int t = 1; t < map.m; ++t)
        ctx.powers.push_back(mat_mul(ctx.powers.back(), ctx.powers.back()));
    for (const auto &p : ctx.powers)
        ctx.powers_adj.push_back(adjoint(p));
    return ctx;
}

inline void check_phase_register_cleared(const QuantumState &state) {
    std::uint64_t mask = 0;
    for (int q : state.layout.phase_register())
        mask |= 1ULL << q;
    for (std::size_t i = 0; i < state.amps.size(); ++i)
        if ((i & mask) != 0 && std::norm(state.amps[i]) > 1e-24)
            throw validation_error("phase register not cleared before QPE");
}

/// Textbook QPE: Hadamard fan-out, controlled V^(2^t), inverse QFT.
/// A fresh estimation run requires a cleared phase register; the reflection
/// R_state replays the same circuit as a bare unitary on arbitrary states
/// and passes require_cleared = false.
inline void apply_qpe(QuantumState &state, const CesContext &ctx, bool require_cleared = true) {
    if (require_cleared)
        check_phase_register_cleared(state);
    const auto block = ctx.layout.system_block_register();
    for (int t = 0; t < ctx.layout.m; ++t)
        apply_hadamard(state, ctx.layout.phase_qubit(t));
    for (int t = 0; t < ctx.layout.m; ++t)
        apply_unitary(state, ctx.powers[t], block, {ctx.layout.phase_qubit(t)}, false);
    apply_inverse_qft(state, ctx.layout.phase_register());
}

inline void apply_qpe_inverse(QuantumState &state, const CesContext &ctx) {
    const auto block = ctx.layout.system_block_register();
    apply_qft(state, ctx.layout.phase_register());
    for (int t = ctx.layout.m - 1; t >= 0; --t)
        apply_unitary(state, ctx.powers_adj[t], block, {ctx.layout.phase_qubit(t)}, false);
    for (int t = ctx.layout.m - 1; t >= 0; --t)
        apply_hadamard(state, ctx.layout.phase_qubit(t));
}

/// The full solver unitary (preparation NOTs + QPE) applied in place.
inline void apply_ces(QuantumState &state, const CesContext &ctx, std::uint64_t u,
                      bool require_cleared = true) {
    for (int i = 0; i < ctx.layout.n; ++i)
        if ((u >> i) & 1ULL)
            apply_x(state, ctx.layout.system_qubit(i));
    apply_qpe(state, ctx, require_cleared);
}

inline void apply_ces_inverse(QuantumState &state, const CesContext &ctx, std::uint64_t u) {
    apply_qpe_inverse(state, ctx);
    for (int i = 0; i < ctx.layout.n; ++i)
        if ((u >> i) & 1ULL)
            apply_x(state, ctx.layout.system_qubit(i));
}

inline QuantumState run_ces(const CesContext &ctx, std::uint64_t u) {
    require(u < ctx.spectrum.dim(), "basis index u outside the matrix dimension");
    QuantumState state(ctx.layout);
    state.amps[0] = cplx{1.0, 0.0};
    apply_ces(state, ctx, u);
    return state;
}

/// Convenience path from a raw matrix: ground truth via eig_oracle.
inline QuantumState run_ces(const SparseHermitian &a, std::uint64_t u, const PhaseMap &map) {
    return run_ces(make_ces(eig_oracle(a), map), u);
}

/// Grid bins an exact on-grid spectrum would populate (walk: both branches).
inline std::vector<std::uint64_t> expected_phase_bins(const CesContext &ctx) {
    const std::uint64_t grid = ctx.map.grid_size();
    std::vector<std::uint64_t> bins;
    for (double lam : ctx.spectrum.eigenvalues) {
        const auto phi = static_cast<std::uint64_t>(
                             std::llround(ctx.map.grid_coordinate(lam))) %
                         grid;
        bins.push_back(phi);
        if (ctx.map.kind == PhaseMap::Kind::walk)
            bins.push_back((grid - phi) % grid);
    }
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    return bins;
}

/// Probability mass outside the nearest-grid bins of the known spectrum;
/// zero (to fp noise) for on-grid inputs, the QPE tail otherwise.
inline double ces_leakage(const QuantumState &state, const CesContext &ctx) {
    const auto bins = expected_phase_bins(ctx);
    const auto dist = register_distribution(state, ctx.layout.phase_register());
    double leaked = 0.0;
    for (const auto &[phi, p] : dist)
        if (!std::binary_search(bins.begin(), bins.end(), phi))
            leaked += p;
    return leaked;
}

} // namespace qpes
