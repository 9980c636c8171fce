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

#include <fstream>
#include <map>
#include <random>

#include "qpes/dense_matrix.hpp"

namespace qpes {

/// Qubit plan for the full register, little-endian within each block:
///
///   [0, n)              system qubits (n = ceil(log2 N))
///   [n, n+w)            walk-branch flag qubit (w = 1 for the walk model)
///   [n+w, n+w+m)        phase qubits, value read as an m-bit integer
///   n+w+m               comparator sign ancilla for the left window edge
///   n+w+m+1             comparator sign ancilla for the right window edge
///
/// Amplitude index bit i corresponds to qubit i.
struct RegisterLayout {
    int n = 1;
    int m = 1;
    bool walk_flag = false;

    int flag_count() const { return walk_flag ? 1 : 0; }
    int system_block() const { return n + flag_count(); }
    int total_qubits() const { return system_block() + m + 2; }
    std::size_t amplitude_count() const { return std::size_t{1} << total_qubits(); }

    int system_qubit(int i) const { return i; }
    int flag_qubit() const { return n; }
    int phase_qubit(int i) const { return system_block() + i; }
    int ancilla_left() const { return system_block() + m; }
    int ancilla_right() const { return system_block() + m + 1; }

    std::vector<int> system_register() const {
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i)
            q[i] = i;
        return q;
    }
    /// system plus flag: everything the spectral unitary acts on
    std::vector<int> system_block_register() const {
        std::vector<int> q(system_block());
        for (int i = 0; i < system_block(); ++i)
            q[i] = i;
        return q;
    }
    std::vector<int> phase_register() const {
        std::vector<int> q(m);
        for (int i = 0; i < m; ++i)
            q[i] = phase_qubit(i);
        return q;
    }
    /// phase + system (+ flag): the span of the eigenpair-solver unitary
    std::vector<int> solver_register() const {
        std::vector<int> q(system_block() + m);
        for (int i = 0; i < system_block() + m; ++i)
            q[i] = i;
        return q;
    }
};

struct QuantumState {
    RegisterLayout layout;
    std::vector<cplx> amps;

    explicit QuantumState(const RegisterLayout &l)
        : layout(l), amps(l.amplitude_count(), cplx{0.0, 0.0}) {}

    double norm2() const {
        double s = 0.0;
        for (const auto &a : amps)
            s += std::norm(a);
        return s;
    }
};

inline std::uint64_t extract_bits(std::uint64_t idx, const std::vector<int> &qubits) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i)
        x |= ((idx >> qubits[i]) & 1ULL) << i;
    return x;
}

inline std::uint64_t replace_bits(std::uint64_t idx, const std::vector<int> &qubits,
                                  std::uint64_t x) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const std::uint64_t bit = (x >> i) & 1ULL;
        idx = (idx & ~(1ULL << qubits[i])) | (bit << qubits[i]);
    }
    return idx;
}

inline void apply_x(QuantumState &state, int qubit) {
    const std::uint64_t bit = 1ULL << qubit;
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if (!(i & bit))
                std::swap(state.amps[i], state.amps[i | bit]);
    });
}

inline void apply_hadamard(QuantumState &state, int qubit) {
    const std::uint64_t bit = 1ULL << qubit;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (i & bit)
                continue;
            const cplx a = state.amps[i];
            const cplx b = state.amps[i | bit];
            state.amps[i] = (a + b) * inv_sqrt2;
            state.amps[i | bit] = (a - b) * inv_sqrt2;
        }
    });
}

/// diag phase e^{i angle} on |11> of (control, target); symmetric in its args
inline void apply_controlled_phase(QuantumState &state, int q1, int q2, double angle) {
    const std::uint64_t mask = (1ULL << q1) | (1ULL << q2);
    const cplx ph{std::cos(angle), std::sin(angle)};
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if ((i & mask) == mask)
                state.amps[i] *= ph;
    });
}

inline void apply_swap(QuantumState &state, int q1, int q2) {
    const std::uint64_t b1 = 1ULL << q1, b2 = 1ULL << q2;
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if ((i & b1) && !(i & b2))
                std::swap(state.amps[i], state.amps[(i & ~b1) | b2]);
    });
}

/// 2|0><0| - I on the named subregister: basis states whose subregister bits
/// are all zero keep their amplitude, every other one is negated.
inline void reflect_about_zero(QuantumState &state, const std::vector<int> &qubits) {
    std::uint64_t mask = 0;
    for (int q : qubits)
        mask |= 1ULL << q;
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if (i & mask)
                state.amps[i] = -state.amps[i];
    });
}

/// Relabels the subregister basis by a bijection f on [0, 2^w): used for the
/// quantum-classical modular adders. Exact permutation, no phases.
template <typename InvFn>
inline void permute_register(QuantumState &state, const std::vector<int> &qubits,
                             InvFn &&f_inverse) {
    std::vector<cplx> out(state.amps.size());
    parallel_for(state.amps.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t y = extract_bits(i, qubits);
            out[i] = state.amps[replace_bits(i, qubits, f_inverse(y))];
        }
    });
    state.amps = std::move(out);
}

namespace detail {

/// u applied to the contiguous low-qubit block [0, k); optional control.
inline void apply_dense_low_block(QuantumState &state, const DenseMatrix &u, int k,
                                  int control) {
    const std::size_t d = std::size_t{1} << k;
    require(u.dim == d, "unitary dimension mismatch");
    const std::size_t blocks = state.amps.size() >> k;
    parallel_for(blocks, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> y(d);
        for (std::size_t b = lo; b < hi; ++b) {
            const std::uint64_t base = b << k;
            if (control >= 0 && !((base >> control) & 1ULL))
                continue;
            mat_vec(u, &state.amps[base], y.data());
            std::copy(y.begin(), y.end(), &state.amps[base]);
        }
    });
}

inline void apply_dense_general(QuantumState &state, const DenseMatrix &u,
                                const std::vector<int> &targets,
                                const std::vector<int> &controls) {
    const int k = static_cast<int>(targets.size());
    const std::size_t d = std::size_t{1} << k;
    require(u.dim == d, "unitary dimension mismatch");
    std::uint64_t tmask = 0, cmask = 0;
    for (int q : targets)
        tmask |= 1ULL << q;
    for (int q : controls) {
        require(!((tmask >> q) & 1ULL), "control overlaps target");
        cmask |= 1ULL << q;
    }
    // offsets[x] = index contribution of subregister value x
    std::vector<std::uint64_t> offsets(d);
    for (std::uint64_t x = 0; x < d; ++x)
        offsets[x] = replace_bits(0, targets, x);

    const int total = state.layout.total_qubits();
    const std::size_t outer_count = state.amps.size() >> k;
    // free qubit positions, ascending
    std::vector<int> free_qubits;
    for (int q = 0; q < total; ++q)
        if (!((tmask >> q) & 1ULL))
            free_qubits.push_back(q);

    parallel_for(outer_count, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> x(d), y(d);
        for (std::size_t o = lo; o < hi; ++o) {
            std::uint64_t base = 0;
            for (std::size_t i = 0; i < free_qubits.size(); ++i)
                base |= ((o >> i) & 1ULL) << free_qubits[i];
            if ((base & cmask) != cmask)
                continue;
            for (std::uint64_t t = 0; t < d; ++t)
                x[t] = state.amps[base | offsets[t]];
            mat_vec(u, x.data(), y.data());
            for (std::uint64_t t = 0; t < d; ++t)
                state.amps[base | offsets[t]] = y[t];
        }
    });
}

} // namespace detail

/// Applies a dense unitary to the named subregister (optionally controlled).
/// `checked` verifies unitarity first; skip it for cached matrices that were
/// validated at construction.
inline void apply_unitary(QuantumState &state, const DenseMatrix &u,
                          const std::vector<int> &targets,
                          const std::vector<int> &controls = {}, bool checked = true) {
    require(!targets.empty() && targets.size() <= 12,
            "dense subregister unitaries are capped at 2^12");
    if (checked)
        require(is_unitary(u), "matrix is not unitary within 1e-12");
    bool low_contiguous = controls.size() <= 1;
    for (std::size_t i = 0; i < targets.size() && low_contiguous; ++i)
        low_contiguous = targets[i] == static_cast<int>(i);
    if (low_contiguous) {
        detail::apply_dense_low_block(state, u, static_cast<int>(targets.size()),
                                      controls.empty() ? -1 : controls[0]);
        return;
    }
    detail::apply_dense_general(state, u, targets, controls);
}

/// |0...0> on everything except the system register, which carries the
/// binary digits of u (realized as X gates on the set bits).
inline QuantumState prepare_basis_u(const RegisterLayout &layout, std::uint64_t u) {
    require(u < (std::uint64_t{1} << layout.n), "basis index u out of range");
    QuantumState state(layout);
    state.amps[0] = cplx{1.0, 0.0};
    for (int i = 0; i < layout.n; ++i)
        if ((u >> i) & 1ULL)
            apply_x(state, layout.system_qubit(i));
    return state;
}

/// Exact marginal over the subregister's basis values. Zero-probability
/// values are omitted.
inline std::map<std::uint64_t, double> register_distribution(const QuantumState &state,
                                                             const std::vector<int> &qubits) {
    std::map<std::uint64_t, double> dist;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        const double p = std::norm(state.amps[i]);
        if (p > 0.0)
            dist[extract_bits(i, qubits)] += p;
    }
    return dist;
}

/// Seeded multinomial draw from register_distribution. The chained-binomial
/// construction costs O(#outcomes) independent of the shot count; the draw
/// is deterministic for a given seed, distribution, and standard library.
inline std::map<std::uint64_t, std::uint64_t>
sample_distribution(const std::map<std::uint64_t, double> &dist, std::uint64_t shots,
                    std::uint64_t seed) {
    require(shots >= 1, "need at least one shot");
    std::mt19937_64 rng(seed);
    std::map<std::uint64_t, std::uint64_t> counts;
    double remaining_mass = 0.0;
    for (const auto &[v, p] : dist)
        remaining_mass += p;
    std::uint64_t remaining = shots;
    for (const auto &[v, p] : dist) {
        if (remaining == 0)
            break;
        double cond = p / remaining_mass;
        if (cond >= 1.0) {
            counts[v] += remaining;
            remaining = 0;
            break;
        }
        std::binomial_distribution<std::uint64_t> bin(remaining, cond);
        const std::uint64_t c = bin(rng);
        if (c > 0)
            counts[v] += c;
        remaining -= c;
        remaining_mass -= p;
        if (remaining_mass <= 0.0)
            break;
    }
    if (remaining > 0 && !dist.empty())
        counts[dist.rbegin()->first] += remaining; // residual rounding mass
    return counts;
}

inline std::map<std::uint64_t, std::uint64_t> sample(const QuantumState &state,
                                                     const std::vector<int> &qubits,
                                                     std::uint64_t shots, std::uint64_t seed) {
    return sample_distribution(register_distribution(state, qubits), shots, seed);
}

// --------------------------------------------------------------------------
// Binary state dump, test-only: header {u32 n_block, u32 m} little-endian,
// then 2^(n_block+m+2) complex doubles. n_block counts system + flag qubits.
// --------------------------------------------------------------------------

inline void dump_state(const QuantumState &state, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open dump file " + path);
    const std::uint32_t n_block = static_cast<std::uint32_t>(state.layout.system_block());
    const std::uint32_t m = static_cast<std::uint32_t>(state.layout.m);
    out.write(reinterpret_cast<const char *>(&n_block), 4);
    out.write(reinterpret_cast<const char *>(&m), 4);
    out.write(reinterpret_cast<const char *>(state.amps.data()),
              static_cast<std::streamsize>(state.amps.size() * sizeof(cplx)));
}

inline QuantumState load_state(const std::string &path, bool walk_flag = false) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open dump file " + path);
    std::uint32_t n_block = 0, m = 0;
    in.read(reinterpret_cast<char *>(&n_block), 4);
    in.read(reinterpret_cast<char *>(&m), 4);
    RegisterLayout layout;
    layout.n = static_cast<int>(n_block) - (walk_flag ? 1 : 0);
    layout.m = static_cast<int>(m);
    layout.walk_flag = walk_flag;
    QuantumState state(layout);
    in.read(reinterpret_cast<char *>(state.amps.data()),
            static_cast<std::streamsize>(state.amps.size() * sizeof(cplx)));
    require(in.good(), "truncated dump file " + path);
    return state;
}

} // namespace qpes
