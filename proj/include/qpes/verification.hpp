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

#include <sstream>

#include "qpes/classical_baselines.hpp"
#include "qpes/complexity_models.hpp"
#include "qpes/grid_synthesis.hpp"
#include "qpes/sampling_estimator.hpp"

namespace qpes {

/// One verification outcome; detail carries the measured numbers.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace verify_detail {

inline std::string fmt(double x) { return format_double(x); }

/// Builds the N-point uniform-weight on-grid fixture: fourier basis,
/// m = log2(N) + 1 exponential grid, eigenvalues homogeneously spread.
struct UniformFixture {
    PhaseMap map;
    CesContext ctx;

    explicit UniformFixture(std::size_t n_dim)
        : map(), ctx() {
        int n = 0;
        while ((std::size_t{1} << n) < n_dim)
            ++n;
        map = build_phase_map(1.0, n + 1, PhaseMap::Kind::exponential);
        std::vector<std::uint64_t> phases(n_dim);
        for (std::size_t j = 0; j < n_dim; ++j)
            phases[j] = j;
        auto [a, spec] = synthesize_on_grid(n, n + 1, map, phases, 0, BasisKind::fourier);
        ctx = make_ces(spec, map);
    }

    /// interval covering exactly the two middle grid phases
    std::pair<double, double> middle_pair() const {
        const std::uint64_t half = map.grid_size() / 4; // = N/2
        const double lo = map.lambda_at(half - 1);
        const double hi = map.lambda_at(half);
        return {lo - 1e-9, hi + 1e-9};
    }
};

/// Minimal shot count at which >= `needed` of `trials` seeded draws put every
/// target estimate within relative tolerance gamma. Doubling search followed
/// by bisection; deterministic for fixed seeds.
inline std::uint64_t empirical_shots(const std::map<std::uint64_t, double> &dist,
                                     const std::vector<std::pair<std::uint64_t, double>> &targets,
                                     double gamma, double c_squared, int trials, int needed,
                                     std::uint64_t seed_base) {
    auto succeeds = [&](std::uint64_t shots) {
        int ok = 0;
        for (int t = 0; t < trials; ++t) {
            const auto counts =
                sample_distribution(dist, shots, seed_base + 7919 * shots + t);
            bool good = true;
            for (const auto &[phi, truth] : targets) {
                const auto it = counts.find(phi);
                const double hat =
                    (it == counts.end() ? 0.0
                                        : static_cast<double>(it->second) /
                                              static_cast<double>(shots)) /
                    c_squared;
                good = good && std::abs(hat - truth) <= gamma * truth;
            }
            ok += good ? 1 : 0;
        }
        return ok >= needed;
    };
    std::uint64_t hi = 8;
    while (!succeeds(hi)) {
        hi *= 2;
        require(hi < (1ULL << 40), "empirical shot search diverged");
    }
    std::uint64_t lo = hi / 2;
    while (hi - lo > std::max<std::uint64_t>(1, hi / 50)) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (succeeds(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace verify_detail

/// Exhaustive comparator check: every half-open window on the m-bit grid,
/// every basis phase; sign flip iff in-window, ancillas restored, 1e-12.
inline CheckResult check_comparator_exhaustive(int m) {
    const std::uint64_t grid = std::uint64_t{1} << m;
    RegisterLayout layout{1, m, false};
    double worst = 0.0;
    std::uint64_t windows_checked = 0;
    for (std::uint64_t l = 0; l + 1 < grid; ++l) {
        for (std::uint64_t r = l + 1; r < grid; ++r) {
            const PhaseWindow w{l, r, 0.0, 0.0, m};
            ++windows_checked;
            for (std::uint64_t phi = 0; phi < grid; ++phi) {
                QuantumState s(layout);
                s.amps[replace_bits(0, layout.phase_register(), phi)] = cplx{1.0, 0.0};
                reflect_good(s, w);
                const double sign = (phi >= l && phi < r) ? -1.0 : 1.0;
                for (std::size_t i = 0; i < s.amps.size(); ++i) {
                    const std::uint64_t p = extract_bits(i, layout.phase_register());
                    const bool anc = ((i >> layout.ancilla_left()) & 1ULL) ||
                                     ((i >> layout.ancilla_right()) & 1ULL);
                    cplx want{0.0, 0.0};
                    if (!anc && p == phi &&
                        extract_bits(i, {0}) == 0) // system qubit untouched
                        want = cplx{sign, 0.0};
                    worst = std::max(worst, std::abs(s.amps[i] - want));
                }
            }
        }
    }
    CheckResult res;
    res.name = "comparator exactness (m=" + std::to_string(m) + ")";
    res.pass = worst <= 1e-12;
    res.detail = std::to_string(windows_checked) + " windows x " + std::to_string(grid) +
                 " phases, max deviation " + verify_detail::fmt(worst);
    return res;
}

/// On-grid 16x16 fixture: the phase marginal reproduces the oracle weights in
/// both spectral-unitary models within 1e-10.
inline CheckResult check_qpe_marginal() {
    std::vector<std::uint64_t> phases;
    for (std::uint64_t j = 0; j < 16; ++j)
        phases.push_back(2 * j + 1);
    double worst = 0.0;
    for (auto kind : {PhaseMap::Kind::exponential, PhaseMap::Kind::walk}) {
        const auto map = build_phase_map(1.0, 6, kind);
        auto [a, synth] = synthesize_on_grid(4, 6, map, phases, 2024);
        const auto oracle = eig_oracle(a);
        auto ctx = make_ces(oracle, map);
        const auto state = run_ces(ctx, 0);
        const auto dist = register_distribution(state, ctx.layout.phase_register());
        for (std::size_t j = 0; j < oracle.dim(); ++j) {
            const auto phi = static_cast<std::uint64_t>(
                                 std::llround(map.grid_coordinate(oracle.eigenvalues[j]))) %
                             map.grid_size();
            const double w = std::norm(oracle.component(0, j));
            if (kind == PhaseMap::Kind::walk) {
                const std::uint64_t mirror = (map.grid_size() - phi) % map.grid_size();
                worst = std::max(worst, std::abs(dist.at(phi) - w / 2.0));
                worst = std::max(worst, std::abs(dist.at(mirror) - w / 2.0));
            } else {
                worst = std::max(worst, std::abs(dist.at(phi) - w));
            }
        }
    }
    CheckResult res;
    res.name = "phase-register marginal vs oracle (N=16, m=6, both models)";
    res.pass = worst <= 1e-10;
    res.detail = "max |marginal - expected| = " + verify_detail::fmt(worst);
    return res;
}

/// Grover exactness: the quarter case amplifies to certainty in one round and
/// the per-round good mass follows sin^2((2r+1) theta).
inline CheckResult check_grover_exactness() {
    verify_detail::UniformFixture f(16);
    std::ostringstream detail;
    bool pass = true;

    // p0 = 1/4: phases 6..9 out of 32 grid slots hold 4 of 16 eigenvalues
    const double l4 = f.map.lambda_at(6) - 1e-9, r4 = f.map.lambda_at(9) + 1e-9;
    const auto quarter = run_pes(f.ctx, 0, l4, r4);
    pass = pass && quarter.plan.t == 1 && quarter.good.k() == 4;
    pass = pass && std::abs(quarter.realized_good_probability - 1.0) <= 1e-10;
    detail << "quarter case: t=" << quarter.plan.t
           << " p=" << verify_detail::fmt(quarter.realized_good_probability);

    // k = 2 pair: per-round tracking
    auto [l2, r2] = f.middle_pair();
    const auto windows = good_phase_windows(l2, r2, f.map);
    auto state = run_ces(f.ctx, 0);
    const double p0 = good_probability(state, windows);
    const auto plan = plan_iterations(p0);
    double worst = 0.0;
    for (std::uint64_t r = 1; r <= plan.t; ++r) {
        reflect_good(state, windows);
        reflect_state(state, f.ctx, 0);
        const double want = std::pow(std::sin((2.0 * r + 1.0) * plan.theta), 2);
        worst = std::max(worst, std::abs(good_probability(state, windows) - want));
    }
    pass = pass && worst <= 1e-10;
    detail << "; per-round max deviation " << verify_detail::fmt(worst) << " over t=" << plan.t;

    CheckResult res;
    res.name = "Grover exactness (quarter case + per-round closed form)";
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

/// End-to-end estimator statistics: 200 seeded trials at the Hoeffding
/// budget; failure fraction <= 0.08, eigenvalues exactly on grid.
inline CheckResult check_estimator_statistics(int trials = 200) {
    verify_detail::UniformFixture f(16);
    auto [ll, rr] = f.middle_pair();
    const auto res_pes = run_pes(f.ctx, 0, ll, rr);
    const auto dist = register_distribution(res_pes.state, f.ctx.layout.phase_register());
    const auto budget = budget_pes(2, 0.1, 0.05);

    std::vector<std::uint64_t> good_bins;
    for (const auto &w : res_pes.windows)
        for (std::uint64_t p = w.phi_l; p < w.phi_r; ++p)
            if (dist.count(p) && dist.at(p) > 1e-6)
                good_bins.push_back(p);

    int failures = 0;
    bool lambda_ok = true;
    for (int t = 0; t < trials; ++t) {
        const auto counts = sample_distribution(dist, budget.shots, 9000 + t);
        const auto rep = estimate_eigenpairs(counts, res_pes.plan, f.map, res_pes.windows);
        bool good = true;
        std::size_t seen = 0;
        for (const auto &e : rep.estimates) {
            if (std::find(good_bins.begin(), good_bins.end(), e.phi) == good_bins.end())
                continue;
            ++seen;
            good = good && std::abs(e.amp_sq_hat - 1.0 / 16.0) <= 0.1 / 16.0;
            lambda_ok = lambda_ok && e.lambda_hat == f.map.lambda_at(e.phi);
        }
        good = good && seen == good_bins.size();
        failures += good ? 0 : 1;
    }
    const double frac = static_cast<double>(failures) / trials;
    CheckResult res;
    res.name = "end-to-end estimator statistics (N=16, k=2, " + std::to_string(trials) +
               " trials, " + std::to_string(budget.shots) + " shots)";
    res.pass = frac <= 0.05 + 0.03 && lambda_ok;
    res.detail = "failure fraction " + verify_detail::fmt(frac) +
                 (lambda_ok ? ", all eigenvalues grid-exact" : ", eigenvalue mismatch");
    return res;
}

/// Sampling-scaling contrast: windowed-pair shot demand flat in N, unfiltered
/// demand growing at least 8x from N=16 to N=256.
inline CheckResult check_sampling_scaling() {
    const double gamma = 0.2;
    std::vector<std::uint64_t> pes_shots, ces_shots;
    std::ostringstream detail;
    for (std::size_t n_dim : {std::size_t{16}, std::size_t{64}, std::size_t{256}}) {
        verify_detail::UniformFixture f(n_dim);
        auto [ll, rr] = f.middle_pair();
        const auto pes = run_pes(f.ctx, 0, ll, rr);
        const auto pes_dist =
            register_distribution(pes.state, f.ctx.layout.phase_register());
        const double truth = 1.0 / static_cast<double>(n_dim);
        std::vector<std::pair<std::uint64_t, double>> targets;
        for (const auto &w : pes.windows)
            for (std::uint64_t p = w.phi_l; p < w.phi_r; ++p)
                if (pes_dist.count(p) && pes_dist.at(p) > 1e-6)
                    targets.emplace_back(p, truth);
        const double c_sq = pes.plan.predicted_c * pes.plan.predicted_c;
        pes_shots.push_back(
            verify_detail::empirical_shots(pes_dist, targets, gamma, c_sq, 40, 36, 11));

        const auto ces_state = run_ces(f.ctx, 0);
        const auto ces_dist =
            register_distribution(ces_state, f.ctx.layout.phase_register());
        ces_shots.push_back(
            verify_detail::empirical_shots(ces_dist, targets, gamma, 1.0, 40, 36, 13));

        detail << "N=" << n_dim << ": windowed " << pes_shots.back() << ", unfiltered "
               << ces_shots.back() << "; ";
    }
    const double pes_ratio =
        static_cast<double>(*std::max_element(pes_shots.begin(), pes_shots.end())) /
        static_cast<double>(*std::min_element(pes_shots.begin(), pes_shots.end()));
    const double ces_growth =
        static_cast<double>(ces_shots.back()) / static_cast<double>(ces_shots.front());
    CheckResult res;
    res.name = "sampling-scaling contrast (gamma=0.2, N in {16, 64, 256})";
    res.pass = pes_ratio <= 1.5 && ces_growth >= 8.0;
    res.detail = detail.str() + "windowed spread x" + verify_detail::fmt(pes_ratio) +
                 ", unfiltered growth x" + verify_detail::fmt(ces_growth);
    return res;
}

/// Classical baselines against the oracle plus the two error-law trends.
inline CheckResult check_baselines() {
    std::ostringstream detail;
    bool pass = true;

    // cross-validation on a random Hermitian fixture
    {
        std::mt19937_64 rng(2025);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<SparseHermitian::Entry> t;
        for (std::size_t r = 0; r < 24; ++r)
            for (std::size_t c = r; c < 24; ++c)
                t.push_back(
                    {r, c, r == c ? cplx{gauss(rng), 0.0} : cplx{gauss(rng), gauss(rng)}});
        const SparseHermitian a(24, t);
        const auto oracle = eig_oracle(a);
        const auto qr = qr_eigensolver(a);
        double worst = 0.0;
        for (std::size_t j = 0; j < 24; ++j)
            worst = std::max(worst, std::abs(qr.eigenvalues[j] - oracle.eigenvalues[j]));
        pass = pass && worst <= 1e-9;
        detail << "qr vs oracle " << verify_detail::fmt(worst);

        const auto lz = lanczos_extremal(a, 24, 7);
        double lworst = 0.0;
        for (std::size_t j = 0; j < 24; ++j)
            lworst = std::max(lworst, std::abs(lz.ritz_values[j] - oracle.eigenvalues[j]));
        pass = pass && lworst <= 1e-8;
        detail << "; full-l lanczos vs oracle " << verify_detail::fmt(lworst);
    }

    // power-method decay on diag(2,1): per-step ratio 0.5 after burn-in
    {
        SparseHermitian a(2, {{0, 0, {2.0, 0.0}}, {1, 1, {1.0, 0.0}}});
        const auto pw = power_method_topk(a, 1, 1e-12, 80, 5);
        const auto &h = pw.stages[0].residual_history;
        bool ratio_ok = pw.stages[0].converged && h.size() >= 10;
        for (std::size_t i = 5; ratio_ok && i + 1 < std::min<std::size_t>(h.size(), 15);
             ++i) {
            if (h[i + 1] < 1e-11)
                break;
            ratio_ok = std::abs(h[i + 1] / h[i] - 0.5) <= 0.05;
        }
        pass = pass && ratio_ok;
        detail << "; power decay ratio " << (ratio_ok ? "within 10%" : "OUT OF BAND");
    }

    // lanczos error trend at N=64, 50 seeds, l in {4..32}
    {
        std::vector<SparseHermitian::Entry> t;
        for (std::size_t i = 0; i < 64; ++i)
            t.push_back({i, i, {static_cast<double>(i + 1), 0.0}});
        const SparseHermitian a(64, t);
        const std::vector<std::size_t> ls = {4, 6, 8, 12, 16, 24, 32};
        std::vector<double> avg(ls.size(), 0.0);
        const int seeds = 50;
        for (int s = 0; s < seeds; ++s)
            for (std::size_t i = 0; i < ls.size(); ++i) {
                const auto lz = lanczos_extremal(a, ls[i], 500 + s);
                avg[i] += std::max(64.0 - lz.ritz_values[0], 1e-16) / seeds;
            }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const double x = std::log2(static_cast<double>(ls[i]));
            const double y = std::log2(avg[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(ls.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        pass = pass && slope <= -1.8;
        detail << "; lanczos error slope " << verify_detail::fmt(slope);
    }

    CheckResult res;
    res.name = "classical baselines vs oracle + error laws";
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

/// Worst-case scaling figure: compensated slopes and the large-N ordering.
inline CheckResult check_scaling_figure(const std::string &out_dir = "") {
    const auto study = scaling_study(1 << 10, 1 << 20, 1, 1, CurveSet::both);
    std::map<std::string, std::vector<std::pair<double, double>>> pts;
    for (const auto &c : study.curves)
        if (c.regime == "query")
            pts[c.method] = c.points;

    auto slope_of = [](std::vector<std::pair<double, double>> v) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto &[x0, y0] : v) {
            const double x = std::log2(x0), y = std::log2(y0);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(v.size());
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    auto divided = [&](const std::string &m, bool by_log2, bool by_ln) {
        auto v = pts.at(m);
        for (auto &[n, c] : v)
            c /= (by_log2 ? std::log2(n) : 1.0) * (by_ln ? std::log(n) : 1.0);
        return v;
    };

    const double s_pes = slope_of(pts.at("PES"));
    const double s_lan = slope_of(divided("Lanczos", true, false));
    const double s_qr = slope_of(pts.at("QR"));
    const double s_pow = slope_of(divided("Power", false, true));
    bool pass = std::abs(s_pes - 1.5) <= 0.05 && std::abs(s_lan - 1.5) <= 0.05 &&
                std::abs(s_qr - 2.0) <= 0.05 && std::abs(s_pow - 2.0) <= 0.05;

    auto at_max = [&](const std::string &m) { return pts.at(m).back().second; };
    pass = pass && at_max("PES") < at_max("Lanczos") && at_max("Lanczos") < at_max("QR") &&
           at_max("QR") < at_max("Power");

    bool wrote = true;
    if (!out_dir.empty()) {
        std::ofstream svg(out_dir + "/plot.svg");
        write_scaling_svg(svg, study);
        std::ofstream cross(out_dir + "/crossovers.csv");
        write_crossovers_csv(cross, study);
        std::ofstream curves(out_dir + "/curves.csv");
        write_curves_csv(curves, study);
        wrote = svg.good() && cross.good() && curves.good();
    }

    CheckResult res;
    res.name = "scaling figure (slopes, ordering, artifacts)";
    res.pass = pass && wrote;
    res.detail = "slopes PES " + verify_detail::fmt(s_pes) + ", Lanczos/log " +
                 verify_detail::fmt(s_lan) + ", QR " + verify_detail::fmt(s_qr) +
                 ", Power/log " + verify_detail::fmt(s_pow) +
                 (out_dir.empty() ? "" : "; artifacts in " + out_dir);
    return res;
}

/// Register budget vs classical storage: log2-many qubits against N*s words.
inline CheckResult check_memory_claim() {
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t n_dim : {std::size_t{16}, std::size_t{64}, std::size_t{256}}) {
        verify_detail::UniformFixture f(n_dim);
        const int n = f.ctx.layout.n;
        const int want = n + f.ctx.map.m + 2;
        pass = pass && f.ctx.layout.total_qubits() == want;
        pass = pass && (std::size_t{1} << n) >= n_dim;

        const auto walk_map = build_phase_map(1.0, f.ctx.map.m, PhaseMap::Kind::walk);
        RegisterLayout wl{n, f.ctx.map.m, true};
        pass = pass && wl.total_qubits() == want + 1;

        detail << "N=" << n_dim << ": " << f.ctx.layout.total_qubits() << " qubits vs "
               << n_dim * n_dim << " dense words (s=N here); ";
    }
    CheckResult res;
    res.name = "memory budget: log2(N) qubits vs Theta(N*s) classical words";
    res.pass = pass;
    res.detail = detail.str();
    return res;
}

} // namespace qpes
