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

#include <functional>

#include "qpes/spectral_unitary.hpp"

namespace qpes {

/// Half-open integer window [phi_l, phi_r) on the m-bit phase grid, carrying
/// the eigenvalue interval it was derived from.
struct PhaseWindow {
    std::uint64_t phi_l = 0;
    std::uint64_t phi_r = 0; // exclusive; <= 2^m
    double lambda_l = 0.0;
    double lambda_r = 0.0;
    int m = 1;

    bool contains(std::uint64_t phi) const { return phi >= phi_l && phi < phi_r; }
    std::uint64_t width() const { return phi_r - phi_l; }
};

/// Indices of eigenvalues inside the target interval.
struct GoodSet {
    std::vector<std::size_t> indices;
    std::size_t k() const { return indices.size(); }
};

inline GoodSet good_set(const Spectrum &spectrum, double lambda_l, double lambda_r) {
    GoodSet g;
    for (std::size_t j = 0; j < spectrum.dim(); ++j)
        if (spectrum.eigenvalues[j] >= lambda_l && spectrum.eigenvalues[j] < lambda_r)
            g.indices.push_back(j);
    return g;
}

namespace detail {

/// Exact good-phase set {phi : f_inv(2 pi phi / 2^m) in [lambda_l, lambda_r)}
/// decomposed into maximal contiguous [l, r) runs. One run for a monotone
/// increasing f; for the walk model the mirrored branch in the upper half of
/// the grid shows up as a second run automatically.
inline std::vector<PhaseWindow> scan_windows(double lambda_l, double lambda_r,
                                             const PhaseMap &map) {
    const std::uint64_t grid = map.grid_size();
    std::vector<PhaseWindow> runs;
    bool in_run = false;
    std::uint64_t start = 0;
    for (std::uint64_t phi = 0; phi <= grid; ++phi) {
        bool good = false;
        if (phi < grid) {
            const double lam = map.lambda_at(phi);
            good = lam >= lambda_l && lam < lambda_r;
        }
        if (good && !in_run) {
            in_run = true;
            start = phi;
        } else if (!good && in_run) {
            in_run = false;
            runs.push_back({start, phi, lambda_l, lambda_r, map.m});
        }
    }
    return runs;
}

} // namespace detail

/// Maps the eigenvalue interval onto the canonical phase window. For an
/// increasing f this equals [ceil(2^m f(lambda_l)/2pi), ceil(2^m f(lambda_r)/2pi));
/// for the decreasing walk map the endpoints swap. The window covers exactly
/// the grid phases whose f_inv image lies in the interval.
inline PhaseWindow lambda_to_phase_window(double lambda_l, double lambda_r,
                                          const PhaseMap &map) {
    require(lambda_l < lambda_r, "need lambda_l < lambda_r");
    require(map.admits(lambda_l) || map.kind == PhaseMap::Kind::walk,
            "lambda_l outside [-alpha, alpha]");
    require(std::abs(lambda_l) <= map.alpha && std::abs(lambda_r) <= map.alpha,
            "interval outside [-alpha, alpha]");
    auto runs = detail::scan_windows(lambda_l, lambda_r, map);
    if (runs.empty())
        throw validation_error("empty grid window: no phase maps into the interval");
    return runs.front();
}

/// All windows the reflection must flip: the canonical one, plus the mirror
/// branch (2^m - phi) for the walk model. Runs are disjoint by construction,
/// so each grid phase is flipped at most once.
inline std::vector<PhaseWindow> good_phase_windows(double lambda_l, double lambda_r,
                                                   const PhaseMap &map) {
    auto runs = detail::scan_windows(lambda_l, lambda_r, map);
    if (runs.empty())
        throw validation_error("empty grid window: no phase maps into the interval");
    return runs;
}

// ---------------------------------------------------------------------------
// Quantum-classical modular adders: |x> -> |x + c mod 2^w> on a register
// given as a qubit list (LSB first; an attached ancilla acts as the MSB).
// Exact basis permutations. A Draper-style QFT adder realizing the same
// permutation costs Theta(w^2) controlled-phase gates; the cost model below
// reports that count without executing gates.
// ---------------------------------------------------------------------------

inline std::uint64_t qc_adder_gate_cost(int width) {
    return static_cast<std::uint64_t>(width) * (width + 1) / 2 + width;
}

inline void qc_add_const(QuantumState &state, const std::vector<int> &reg,
                         std::uint64_t constant) {
    const int w = static_cast<int>(reg.size());
    require(w >= 1 && w <= 63, "adder register width out of range");
    const std::uint64_t wrap = std::uint64_t{1} << w;
    require(constant < wrap, "adder constant out of range");
    if (constant == 0)
        return;
    permute_register(state, reg,
                     [&](std::uint64_t y) { return (y + wrap - constant) & (wrap - 1); });
}

inline void qc_sub_const(QuantumState &state, const std::vector<int> &reg,
                         std::uint64_t constant) {
    const int w = static_cast<int>(reg.size());
    require(w >= 1 && w <= 63, "adder register width out of range");
    const std::uint64_t wrap = std::uint64_t{1} << w;
    require(constant < wrap, "adder constant out of range");
    if (constant == 0)
        return;
    permute_register(state, reg, [&](std::uint64_t y) { return (y + constant) & (wrap - 1); });
}

/// Optional observer for the comparator sequence; receives a label and the
/// state after each step.
using ReflectTrace = std::function<void(const char *, const QuantumState &)>;

namespace detail {

inline void check_ancillas_cleared(const QuantumState &state) {
    const std::uint64_t mask = (1ULL << state.layout.ancilla_left()) |
                               (1ULL << state.layout.ancilla_right());
    for (std::size_t i = 0; i < state.amps.size(); ++i)
        if ((i & mask) != 0 && std::norm(state.amps[i]) > 1e-24)
            throw validation_error("comparator ancillas not cleared");
}

/// One comparator pass: sign-extract against both window edges, combine with
/// a controlled-Z, uncompute. Flips the amplitude sign exactly on
/// phi in [phi_l, phi_r) and restores both ancillas.
inline void reflect_window(QuantumState &state, const PhaseWindow &w,
                           const ReflectTrace &trace) {
    const auto &layout = state.layout;
    auto phase = layout.phase_register();
    std::vector<int> phase_ext_l = phase;
    phase_ext_l.push_back(layout.ancilla_left());
    std::vector<int> phase_ext_r = phase;
    phase_ext_r.push_back(layout.ancilla_right());
    const std::uint64_t grid = std::uint64_t{1} << layout.m;
    require(w.phi_r <= grid, "window exceeds the phase grid");

    // sign-extract against the left edge: MSB ancilla <- sgn_b(phi - phi_l)
    qc_sub_const(state, phase_ext_l, w.phi_l);
    if (trace)
        trace("sub-left", state);
    // invert: ancilla_left <- not sgn_b(phi - phi_l), i.e. [phi >= phi_l]
    apply_x(state, layout.ancilla_left());
    if (trace)
        trace("not-left", state);
    // restore the main register (ancilla keeps the comparison bit)
    qc_add_const(state, phase, w.phi_l);
    if (trace)
        trace("restore-main", state);
    // sign-extract against the right edge: ancilla_right <- [phi < phi_r]
    qc_sub_const(state, phase_ext_r, w.phi_r);
    if (trace)
        trace("sub-right", state);
    // combine both sign bits into a phase flip
    apply_controlled_phase(state, layout.ancilla_left(), layout.ancilla_right(), kPi);
    if (trace)
        trace("controlled-z", state);
    // uncompute steps 1-4
    qc_add_const(state, phase_ext_r, w.phi_r);
    qc_sub_const(state, phase, w.phi_l);
    apply_x(state, layout.ancilla_left());
    qc_add_const(state, phase_ext_l, w.phi_l);
    if (trace)
        trace("uncompute", state);
}

} // namespace detail

/// Reflection around the good states: diagonal in the phase basis, amplitude
/// negated iff the phase value lies in one of the (disjoint) windows.
inline void reflect_good(QuantumState &state, const std::vector<PhaseWindow> &windows,
                         const ReflectTrace &trace = nullptr) {
    detail::check_ancillas_cleared(state);
    for (const auto &w : windows) {
        require(w.phi_l < w.phi_r, "empty phase window");
        detail::reflect_window(state, w, trace);
    }
}

inline void reflect_good(QuantumState &state, const PhaseWindow &window,
                         const ReflectTrace &trace = nullptr) {
    reflect_good(state, std::vector<PhaseWindow>{window}, trace);
}

/// Exact probability mass of phase values inside the windows.
inline double good_probability(const QuantumState &state,
                               const std::vector<PhaseWindow> &windows) {
    const auto dist = register_distribution(state, state.layout.phase_register());
    double p = 0.0;
    for (const auto &[phi, prob] : dist)
        for (const auto &w : windows)
            if (w.contains(phi)) {
                p += prob;
                break;
            }
    return p;
}

inline double good_probability(const QuantumState &state, const PhaseWindow &window) {
    return good_probability(state, std::vector<PhaseWindow>{window});
}

} // namespace qpes
