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

#include "qpes/window_filter.hpp"

namespace qpes {

/// Iteration plan for the Grover-style amplification.
///
/// theta satisfies sin^2(theta) = p0 (initial good-state probability); after
/// t rounds the good mass is sin^2((2t+1) theta) and every good amplitude is
/// scaled by the same real factor c = sin((2t+1) theta)/sqrt(p0).
struct AAPlan {
    enum class Mode { oracle_exact, worst_case };

    std::uint64_t t = 0;
    double theta = 0.0;
    double p0 = 0.0;          // probability the plan was computed from
    double predicted_c = 1.0; // realized amplitude scale on the good branch
    Mode mode = Mode::oracle_exact;

    double final_good_probability() const {
        const double s = std::sin((2.0 * static_cast<double>(t) + 1.0) * theta);
        return s * s;
    }
};

/// t = max(0, round(pi/(4 theta) - 1/2)); no fractional rotation, so the
/// residual miss probability 1 - sin^2((2t+1) theta) is reported, never
/// absorbed.
inline AAPlan plan_iterations(double p0, AAPlan::Mode mode = AAPlan::Mode::oracle_exact) {
    require(p0 > 0.0, "amplification needs a nonempty good set (p0 > 0)");
    require(p0 <= 1.0 + 1e-12, "good probability exceeds 1");
    p0 = std::min(p0, 1.0);
    AAPlan plan;
    plan.mode = mode;
    plan.p0 = p0;
    plan.theta = std::asin(std::sqrt(p0));
    const double raw = kPi / (4.0 * plan.theta) - 0.5;
    plan.t = raw <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(raw));
    plan.predicted_c =
        std::sin((2.0 * static_cast<double>(plan.t) + 1.0) * plan.theta) / std::sqrt(p0);
    return plan;
}

/// Worst-case planning input: k good states out of N with the walk model's
/// halved branch mass, p0 = k/(2N).
inline AAPlan plan_iterations_worst_case(std::size_t n_dim, std::size_t k) {
    require(k >= 1 && k <= n_dim, "need 1 <= k <= N");
    return plan_iterations(static_cast<double>(k) / (2.0 * static_cast<double>(n_dim)),
                           AAPlan::Mode::worst_case);
}

/// R_state = CES (2|0><0| - I) CES^dag over the solver qubits.
inline void reflect_state(QuantumState &state, const CesContext &ctx, std::uint64_t u) {
    apply_ces_inverse(state, ctx, u);
    reflect_about_zero(state, state.layout.solver_register());
    apply_ces(state, ctx, u, /*require_cleared=*/false);
}

/// (R_state R_G)^t applied to a solver output state.
inline void run_aa(QuantumState &state, const std::vector<PhaseWindow> &windows,
                   const AAPlan &plan, const CesContext &ctx, std::uint64_t u) {
    for (std::uint64_t r = 0; r < plan.t; ++r) {
        reflect_good(state, windows);
        reflect_state(state, ctx, u);
    }
}

struct PesResult {
    QuantumState state;
    AAPlan plan;
    GoodSet good;
    std::vector<PhaseWindow> windows;
    double realized_good_probability = 0.0;
};

/// Full partial eigenpair solver: CES, then window-filtered amplification.
/// oracle_exact mode plans from the exact initial good mass; worst_case mode
/// plans from k/(2N) and reports the realized numbers alongside.
inline PesResult run_pes(const CesContext &ctx, std::uint64_t u, double lambda_l,
                         double lambda_r, AAPlan::Mode mode = AAPlan::Mode::oracle_exact) {
    PesResult res{run_ces(ctx, u), {}, good_set(ctx.spectrum, lambda_l, lambda_r), {}, 0.0};
    require(res.good.k() >= 1, "no eigenvalue inside the target interval");
    res.windows = good_phase_windows(lambda_l, lambda_r, ctx.map);

    const double p0 = good_probability(res.state, res.windows);
    require(p0 > 0.0, "initial good probability is zero");
    if (mode == AAPlan::Mode::oracle_exact) {
        res.plan = plan_iterations(p0, mode);
    } else {
        res.plan = plan_iterations_worst_case(ctx.spectrum.dim(), res.good.k());
        // report the scale actually realized with the worst-case t
        const double theta = std::asin(std::sqrt(p0));
        res.plan.theta = theta;
        res.plan.p0 = p0;
        res.plan.predicted_c =
            std::sin((2.0 * static_cast<double>(res.plan.t) + 1.0) * theta) / std::sqrt(p0);
    }
    run_aa(res.state, res.windows, res.plan, ctx, u);
    res.realized_good_probability = good_probability(res.state, res.windows);
    return res;
}

inline PesResult run_pes(const SparseHermitian &a, std::uint64_t u, const PhaseMap &map,
                         double lambda_l, double lambda_r,
                         AAPlan::Mode mode = AAPlan::Mode::oracle_exact) {
    return run_pes(make_ces(eig_oracle(a), map), u, lambda_l, lambda_r, mode);
}

} // namespace qpes
