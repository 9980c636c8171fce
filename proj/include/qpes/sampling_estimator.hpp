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

#include "qpes/amplitude_amplification.hpp"
#include "qpes/result_csv.hpp"

namespace qpes {

/// Shot budget from the two-sided Hoeffding union bound over M tracked
/// outcomes: shots = ceil(ln(2M/zeta) / (2 delta^2)) guarantees every
/// outcome probability is estimated within +-delta except with probability
/// at most zeta.
struct SampleBudget {
    std::uint64_t shots = 0;
    double delta = 0.0;
    double gamma = 0.0;
    double zeta = 0.0;
    std::size_t outcomes = 0; // M
};

inline std::uint64_t hoeffding_shots(double delta, double zeta, std::size_t outcomes) {
    const double raw =
        std::log(2.0 * static_cast<double>(outcomes) / zeta) / (2.0 * delta * delta);
    return static_cast<std::uint64_t>(std::ceil(raw));
}

/// Unfiltered solver budget: worst-case |v_uj|^2 = 1/N gives delta = gamma/N
/// over M = N outcomes; Theta((N^2/gamma^2) ln(N/zeta)).
inline SampleBudget budget_ces(std::size_t n_dim, double gamma, double zeta) {
    require(n_dim >= 1, "need N >= 1");
    require(gamma > 0.0 && gamma < 1.0 + 1e-15, "gamma must lie in (0, 1]");
    require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0, 1)");
    SampleBudget b;
    b.gamma = gamma;
    b.zeta = zeta;
    b.outcomes = n_dim;
    b.delta = gamma / static_cast<double>(n_dim);
    b.shots = hoeffding_shots(b.delta, zeta, b.outcomes);
    return b;
}

/// Window-filtered budget: amplified masses are Theta(1/k), so delta =
/// gamma/k over M = k outcomes; Theta((k^2/gamma^2) ln(k/zeta)) — no N.
inline SampleBudget budget_pes(std::size_t k, double gamma, double zeta) {
    require(k >= 1, "need k >= 1");
    return budget_ces(k, gamma, zeta);
}

struct EigenpairEstimate {
    std::uint64_t phi = 0;    // canonical grid phase (walk: lower branch)
    double lambda_hat = 0.0;  // f_inv of the grid phase
    double amp_sq_hat = 0.0;  // |v_u j|^2 after amplification correction
    double ci_halfwidth = 0.0;
    std::uint64_t raw_count = 0;
    std::uint64_t shots = 0;
};

struct EstimateReport {
    std::vector<EigenpairEstimate> estimates; // sorted by descending amp_sq_hat
    std::uint64_t leakage_count = 0;          // outcomes outside every window
    double leakage_probability = 0.0;         // raw fraction, uncorrected
    std::uint64_t shots = 0;
    double c_squared = 1.0;
};

/// Turns measured phase counts into eigenpair estimates. Walk-model mirror
/// bins phi and 2^m - phi are merged first (each branch carries half the
/// mass, so the merged mass needs no extra branch factor); the amplification
/// is undone by dividing through the plan's realized |c|^2.
inline EstimateReport estimate_eigenpairs(const std::map<std::uint64_t, std::uint64_t> &counts,
                                          const AAPlan &plan, const PhaseMap &map,
                                          const std::vector<PhaseWindow> &windows,
                                          double zeta = 0.05) {
    require(!counts.empty(), "no measurement outcomes");
    const double c_sq = plan.predicted_c * plan.predicted_c;
    require(c_sq > 0.0, "amplification scale |c|^2 is zero");

    const std::uint64_t grid = map.grid_size();
    std::uint64_t shots = 0;
    for (const auto &[phi, c] : counts)
        shots += c;
    require(shots >= 1, "empty counts");

    auto canonical = [&](std::uint64_t phi) {
        if (map.kind != PhaseMap::Kind::walk)
            return phi;
        const std::uint64_t mirror = (grid - phi) % grid;
        return std::min(phi, mirror);
    };
    auto in_any_window = [&](std::uint64_t phi) {
        if (windows.empty())
            return true; // unfiltered run: every outcome is tracked
        for (const auto &w : windows)
            if (w.contains(phi))
                return true;
        return false;
    };

    std::map<std::uint64_t, std::uint64_t> merged; // canonical phi -> count
    EstimateReport rep;
    rep.shots = shots;
    rep.c_squared = c_sq;
    for (const auto &[phi, count] : counts) {
        require(phi < grid, "phase outcome beyond the grid");
        if (in_any_window(phi))
            merged[canonical(phi)] += count;
        else
            rep.leakage_count += count;
    }
    rep.leakage_probability =
        static_cast<double>(rep.leakage_count) / static_cast<double>(shots);

    const std::size_t m_outcomes = std::max<std::size_t>(1, merged.size());
    const double ci = std::sqrt(std::log(2.0 * static_cast<double>(m_outcomes) / zeta) /
                                (2.0 * static_cast<double>(shots))) /
                      c_sq;
    for (const auto &[phi, count] : merged) {
        EigenpairEstimate e;
        e.phi = phi;
        e.lambda_hat = map.lambda_at(phi);
        e.amp_sq_hat =
            static_cast<double>(count) / static_cast<double>(shots) / c_sq;
        e.ci_halfwidth = ci;
        e.raw_count = count;
        e.shots = shots;
        rep.estimates.push_back(e);
    }
    std::sort(rep.estimates.begin(), rep.estimates.end(),
              [](const EigenpairEstimate &a, const EigenpairEstimate &b) {
                  if (a.amp_sq_hat != b.amp_sq_hat)
                      return a.amp_sq_hat > b.amp_sq_hat;
                  return a.phi < b.phi;
              });
    return rep;
}

inline std::vector<ResultRow> to_result_rows(const EstimateReport &rep) {
    std::vector<ResultRow> rows;
    rows.reserve(rep.estimates.size() + 1);
    for (const auto &e : rep.estimates)
        rows.push_back({e.phi, e.lambda_hat, e.amp_sq_hat, e.ci_halfwidth, e.raw_count, true});
    if (rep.leakage_count > 0)
        rows.push_back({std::nullopt, std::nullopt, rep.leakage_probability, std::nullopt,
                        rep.leakage_count, false});
    return rows;
}

} // namespace qpes
