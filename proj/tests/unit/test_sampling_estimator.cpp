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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "qpes/grid_synthesis.hpp"
#include "qpes/sampling_estimator.hpp"

using namespace qpes;

namespace {

struct PesFixture {
    PhaseMap map;
    CesContext ctx;
    PesResult res;
    std::map<std::uint64_t, double> dist;

    explicit PesFixture(PhaseMap::Kind kind)
        : map(build_phase_map(1.0, 6, kind)), ctx(), res{QuantumState{RegisterLayout{}}, {}, {}, {}, 0.0} {
        std::vector<std::uint64_t> phases;
        for (std::uint64_t j = 0; j < 16; ++j)
            phases.push_back(2 * j + 1);
        auto [a, spec] = synthesize_on_grid(4, 6, map, phases, 0, BasisKind::fourier);
        ctx = make_ces(spec, map);
        const double lam_a = map.lambda_at(15), lam_b = map.lambda_at(17);
        res = run_pes(ctx, 0, std::min(lam_a, lam_b) - 1e-9, std::max(lam_a, lam_b) + 1e-9);
        dist = register_distribution(res.state, ctx.layout.phase_register());
    }
};

} // namespace

TEST_CASE("budget arithmetic matches the Hoeffding instantiation") {
    // recomputed independently: ceil(ln(2N/zeta) / (2 (gamma/N)^2))
    const auto ces = budget_ces(16, 1.0, 0.05);
    const double want_ces = std::ceil(std::log(2.0 * 16.0 / 0.05) / (2.0 / 256.0));
    CHECK(ces.shots == static_cast<std::uint64_t>(want_ces));
    CHECK(ces.shots == 828);
    CHECK(ces.delta == Catch::Approx(1.0 / 16.0));
    CHECK(ces.outcomes == 16);

    const auto pes = budget_pes(2, 0.1, 0.05);
    const double want_pes = std::ceil(std::log(2.0 * 2.0 / 0.05) / (2.0 * 0.05 * 0.05));
    CHECK(pes.shots == static_cast<std::uint64_t>(want_pes));
    CHECK(pes.shots == 877);
}

TEST_CASE("budget scaling in N and gamma") {
    const auto b16 = budget_ces(16, 1.0, 0.05);
    const auto b32 = budget_ces(32, 1.0, 0.05);
    const double ratio = static_cast<double>(b32.shots) / static_cast<double>(b16.shots);
    CHECK(ratio >= 4.0);      // delta halves -> at least 4x
    CHECK(ratio <= 4.0 * 1.2); // up to the log factor

    const auto g1 = budget_pes(2, 0.2, 0.05);
    const auto g2 = budget_pes(2, 0.1, 0.05);
    CHECK(static_cast<double>(g2.shots) ==
          Catch::Approx(4.0 * static_cast<double>(g1.shots)).margin(4.0));
}

TEST_CASE("window budget does not depend on the matrix size") {
    // k = 1: the budget formula has no N in it at all
    const auto b = budget_pes(1, 0.5, 0.1);
    CHECK(b.shots == hoeffding_shots(0.5, 0.1, 1));
    // k = N reproduces the unfiltered budget
    CHECK(budget_pes(16, 1.0, 0.05).shots == budget_ces(16, 1.0, 0.05).shots);
}

TEST_CASE("budget monotonicity") {
    std::uint64_t prev = 0;
    for (std::size_t m : {1, 2, 4, 8, 16}) {
        const auto b = hoeffding_shots(0.1, 0.05, m);
        CHECK(b >= prev); // nondecreasing in M
        prev = b;
    }
    CHECK(budget_pes(2, 0.05, 0.05).shots >= budget_pes(2, 0.1, 0.05).shots);
    CHECK(budget_pes(2, 0.1, 0.01).shots >= budget_pes(2, 0.1, 0.05).shots);
    CHECK(hoeffding_shots(0.05, 0.05, 4) >= hoeffding_shots(0.1, 0.05, 4));
    CHECK_THROWS_AS(budget_ces(16, 0.0, 0.05), validation_error);
    CHECK_THROWS_AS(budget_ces(16, 1.0, 1.0), validation_error);
}

TEST_CASE("deterministic fixture estimates exactly") {
    // identity basis, u is an eigenvector: a single outcome with full count
    const auto map = build_phase_map(1.0, 4, PhaseMap::Kind::exponential);
    auto [a, spec] = synthesize_on_grid(2, 4, map, {2, 5, 6, 7}, 0, BasisKind::identity);
    auto ctx = make_ces(spec, map);
    const auto state = run_ces(ctx, 1);
    const auto counts = sample(state, ctx.layout.phase_register(), 500, 3);
    AAPlan plan; // t = 0, c = 1
    const auto rep = estimate_eigenpairs(counts, plan, map, {});
    REQUIRE(rep.estimates.size() == 1);
    CHECK(rep.estimates[0].amp_sq_hat == Catch::Approx(1.0));
    CHECK(rep.estimates[0].raw_count == 500);
    CHECK(rep.leakage_count == 0);
    // grid-exact eigenvalue recovery
    CHECK(rep.estimates[0].lambda_hat == map.lambda_at(rep.estimates[0].phi));
    bool matches_an_eigenvalue = false;
    for (double ev : spec.eigenvalues)
        matches_an_eigenvalue = matches_an_eigenvalue || ev == rep.estimates[0].lambda_hat;
    CHECK(matches_an_eigenvalue);
}

TEST_CASE("estimator guarantees hold over 100 seeded trials") {
    PesFixture f(PhaseMap::Kind::exponential);
    const auto budget = budget_pes(2, 0.1, 0.05);
    REQUIRE(budget.shots == 877);
    int ok = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto counts = sample_distribution(f.dist, budget.shots, 1000 + trial);
        const auto rep = estimate_eigenpairs(counts, f.res.plan, f.map, f.res.windows);
        bool good = true;
        int seen = 0;
        for (const auto &e : rep.estimates) {
            if (e.phi != 15 && e.phi != 17)
                continue;
            ++seen;
            good = good && std::abs(e.amp_sq_hat - 1.0 / 16.0) <= 0.1 / 16.0;
            good = good && e.lambda_hat == f.map.lambda_at(e.phi);
        }
        good = good && seen == 2;
        ok += good ? 1 : 0;
    }
    CHECK(ok >= 95);
}

TEST_CASE("estimates plus leakage account for all probability mass") {
    PesFixture f(PhaseMap::Kind::exponential);
    const auto counts = sample_distribution(f.dist, 5000, 77);
    const auto rep = estimate_eigenpairs(counts, f.res.plan, f.map, f.res.windows);
    double total = rep.leakage_probability;
    for (const auto &e : rep.estimates)
        total += e.amp_sq_hat * rep.c_squared; // undo the correction
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    // sorted by descending corrected mass
    for (std::size_t i = 0; i + 1 < rep.estimates.size(); ++i)
        CHECK(rep.estimates[i].amp_sq_hat >= rep.estimates[i + 1].amp_sq_hat);
}

TEST_CASE("walk-model mirror bins merge onto a single eigenvalue") {
    PesFixture walk(PhaseMap::Kind::walk);
    PesFixture expo(PhaseMap::Kind::exponential);

    // statevector-exact: the merged walk masses equal the exponential masses
    const std::uint64_t grid = walk.map.grid_size();
    std::map<std::uint64_t, double> merged;
    for (const auto &[phi, p] : walk.dist)
        merged[std::min(phi, (grid - phi) % grid)] += p;
    CHECK(merged.at(15) == Catch::Approx(expo.dist.at(15)).margin(1e-9));
    CHECK(merged.at(17) == Catch::Approx(expo.dist.at(17)).margin(1e-9));

    // estimator view: one estimate per eigenvalue, mass within sampling error
    const auto counts = sample_distribution(walk.dist, 200000, 5);
    const auto rep = estimate_eigenpairs(counts, walk.res.plan, walk.map, walk.res.windows);
    std::size_t in_window = 0;
    for (const auto &e : rep.estimates) {
        if (e.phi != 15 && e.phi != 17)
            continue;
        ++in_window;
        CHECK(e.amp_sq_hat == Catch::Approx(1.0 / 16.0).margin(0.005));
        // lambda from the lower branch equals the eigenvalue exactly
        CHECK(e.lambda_hat == walk.map.lambda_at(e.phi));
    }
    CHECK(in_window == 2);
}

TEST_CASE("estimator is unbiased over 1000 seeded trials") {
    PesFixture f(PhaseMap::Kind::exponential);
    const std::uint64_t shots = 877;
    const double truth = 1.0 / 16.0;
    const double p = f.dist.at(15);
    double mean = 0.0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const auto counts = sample_distribution(f.dist, shots, 40000 + trial);
        const auto rep = estimate_eigenpairs(counts, f.res.plan, f.map, f.res.windows);
        for (const auto &e : rep.estimates)
            if (e.phi == 15)
                mean += e.amp_sq_hat;
    }
    mean /= 1000.0;
    const double sigma_single =
        std::sqrt(p * (1.0 - p) / static_cast<double>(shots)) / f.res.plan.predicted_c /
        f.res.plan.predicted_c;
    const double se = sigma_single / std::sqrt(1000.0);
    CHECK(std::abs(mean - truth) <= 3.0 * se);
}

TEST_CASE("estimator rejects degenerate inputs") {
    const auto map = build_phase_map(1.0, 4, PhaseMap::Kind::exponential);
    AAPlan plan;
    CHECK_THROWS_AS(estimate_eigenpairs({}, plan, map, {}), validation_error);
    AAPlan zero_c = plan;
    zero_c.predicted_c = 0.0;
    CHECK_THROWS_AS(estimate_eigenpairs({{1, 10}}, zero_c, map, {}), validation_error);
}

TEST_CASE("result csv is stable and RFC-4180 shaped") {
    EstimateReport rep;
    rep.shots = 100;
    rep.c_squared = 4.0;
    rep.estimates.push_back({5, 0.25, 0.5, 0.01, 80, 100});
    rep.leakage_count = 20;
    rep.leakage_probability = 0.2;
    std::ostringstream out;
    write_result_csv(out, to_result_rows(rep));
    CHECK(out.str() ==
          "phi,lambda_hat,amp_sq_hat,ci_halfwidth,count,in_window\r\n"
          "5,0.25,0.5,0.01,80,1\r\n"
          ",,0.20000000000000001,,20,0\r\n");
}
