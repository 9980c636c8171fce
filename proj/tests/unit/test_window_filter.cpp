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

#include <random>

#include "qpes/grid_synthesis.hpp"
#include "qpes/window_filter.hpp"

using namespace qpes;

namespace {

/// basis state with the given phase value, everything else 0
QuantumState phase_basis_state(const RegisterLayout &layout, std::uint64_t phi) {
    QuantumState s(layout);
    s.amps[replace_bits(0, layout.phase_register(), phi)] = cplx{1.0, 0.0};
    return s;
}

/// the single nonzero amplitude of a basis state and its index
std::pair<std::uint64_t, cplx> single_support(const QuantumState &s) {
    std::uint64_t idx = 0;
    cplx amp{0.0, 0.0};
    int found = 0;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if (std::abs(s.amps[i]) > 1e-9) {
            idx = i;
            amp = s.amps[i];
            ++found;
        }
    REQUIRE(found == 1);
    return {idx, amp};
}

QuantumState random_state(const RegisterLayout &layout, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    QuantumState s(layout);
    double nrm = 0.0;
    for (auto &a : s.amps) {
        a = cplx{gauss(rng), gauss(rng)};
        nrm += std::norm(a);
    }
    nrm = std::sqrt(nrm);
    for (auto &a : s.amps)
        a /= nrm;
    return s;
}

} // namespace

TEST_CASE("full eigenvalue range maps to half the exponential grid") {
    const auto map = build_phase_map(1.0, 4, PhaseMap::Kind::exponential);
    const auto w = lambda_to_phase_window(-1.0, 1.0, map);
    CHECK(w.phi_l == 0);
    CHECK(w.phi_r == 8);
}

TEST_CASE("window around a single synthesized grid phase") {
    const auto map = build_phase_map(1.0, 4, PhaseMap::Kind::exponential);
    const double lam5 = map.lambda_at(5);
    const double lam6 = map.lambda_at(6);
    const auto w = lambda_to_phase_window(lam5, lam6, map);
    CHECK(w.phi_l == 5);
    CHECK(w.phi_r == 6);
}

TEST_CASE("exponential windows agree with the ceil-formula endpoints") {
    const auto map = build_phase_map(1.3, 6, PhaseMap::Kind::exponential);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.3, 1.3);
    for (int trial = 0; trial < 50; ++trial) {
        double a = unif(rng), b = unif(rng);
        if (a > b)
            std::swap(a, b);
        if (b - a < 0.2)
            continue;
        const auto w = lambda_to_phase_window(a, b, map);
        // increasing f: phi_{l/r} = ceil(2^m f(lambda_{l/r}) / 2pi)
        const auto lceil = static_cast<std::uint64_t>(std::ceil(map.grid_coordinate(a) - 1e-9));
        const auto rceil = static_cast<std::uint64_t>(std::ceil(map.grid_coordinate(b) - 1e-9));
        CHECK(w.phi_l == lceil);
        CHECK(w.phi_r == rceil);
    }
}

TEST_CASE("walk windows cover exactly the grid phases inside the interval") {
    const auto map = build_phase_map(1.0, 5, PhaseMap::Kind::walk);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double a = unif(rng), b = unif(rng);
        if (a > b)
            std::swap(a, b);
        if (b - a < 0.1)
            continue;
        std::vector<PhaseWindow> windows;
        try {
            windows = good_phase_windows(a, b, map);
        } catch (const validation_error &) {
            continue; // interval misses every grid point
        }
        // brute-force membership scan over the whole grid
        for (std::uint64_t phi = 0; phi < map.grid_size(); ++phi) {
            const double lam = map.lambda_at(phi);
            const bool want = lam >= a && lam < b;
            bool got = false;
            for (const auto &w : windows)
                got = got || w.contains(phi);
            CHECK(got == want);
        }
        // windows are disjoint
        for (std::size_t i = 0; i + 1 < windows.size(); ++i)
            CHECK(windows[i].phi_r <= windows[i + 1].phi_l);
    }
}

TEST_CASE("walk window spanning the grid midpoint stays a single run") {
    // lambda near -alpha sits at phi = 2^(m-1); its mirror is itself
    const auto map = build_phase_map(1.0, 4, PhaseMap::Kind::walk);
    const auto windows = good_phase_windows(-1.0, -0.8, map);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].phi_l == 7);
    CHECK(windows[0].phi_r == 10);
}

TEST_CASE("empty windows are a planning error") {
    const auto map = build_phase_map(1.0, 3, PhaseMap::Kind::exponential);
    // between two adjacent grid eigenvalues there is no grid point
    const double mid = map.lambda_at(2) + 1e-6;
    CHECK_THROWS_AS(lambda_to_phase_window(mid, mid + 1e-7, map), validation_error);
    CHECK_THROWS_AS(lambda_to_phase_window(0.5, 0.4, map), validation_error);
}

TEST_CASE("adders permute basis values modulo 2^w") {
    RegisterLayout l{1, 4, false};
    auto s = phase_basis_state(l, 13);
    const auto before = s.amps;
    qc_add_const(s, l.phase_register(), 0);
    CHECK(s.amps == before);

    qc_add_const(s, l.phase_register(), 5);
    auto [idx, amp] = single_support(s);
    CHECK(extract_bits(idx, l.phase_register()) == 2); // 13 + 5 mod 16
    CHECK(std::abs(amp - cplx{1.0, 0.0}) < 1e-15);

    CHECK_THROWS_AS(qc_add_const(s, l.phase_register(), 16), validation_error);
    CHECK_THROWS_AS(qc_sub_const(s, l.phase_register(), 99), validation_error);
}

TEST_CASE("add then subtract is the identity on every basis state") {
    RegisterLayout l{1, 3, false};
    for (std::uint64_t x = 0; x < 8; ++x) {
        for (std::uint64_t c = 0; c < 8; ++c) {
            auto s = phase_basis_state(l, x);
            qc_add_const(s, l.phase_register(), c);
            qc_sub_const(s, l.phase_register(), c);
            auto [idx, amp] = single_support(s);
            CHECK(extract_bits(idx, l.phase_register()) == x);
            CHECK(std::abs(amp - cplx{1.0, 0.0}) < 1e-15);
        }
    }
}

TEST_CASE("subtraction against an MSB ancilla extracts the binary sign") {
    RegisterLayout l{1, 3, false};
    auto ext = l.phase_register();
    ext.push_back(l.ancilla_left());

    // x = 5 >= phi_l = 3: MSB stays 0, register holds 2
    auto s = phase_basis_state(l, 5);
    qc_sub_const(s, ext, 3);
    auto [idx, amp] = single_support(s);
    CHECK(extract_bits(idx, l.phase_register()) == 2);
    CHECK(((idx >> l.ancilla_left()) & 1ULL) == 0);

    // x = 2 < phi_l = 3: MSB reads 1
    auto t = phase_basis_state(l, 2);
    qc_sub_const(t, ext, 3);
    std::tie(idx, amp) = single_support(t);
    CHECK(((idx >> l.ancilla_left()) & 1ULL) == 1);

    // subtract 0 is the identity
    auto u = phase_basis_state(l, 6);
    const auto before = u.amps;
    qc_sub_const(u, ext, 0);
    CHECK(u.amps == before);
}

TEST_CASE("reflect_good flips exactly the in-window phases") {
    RegisterLayout l{1, 3, false};
    const PhaseWindow w{3, 7, 0.0, 0.0, 3};
    for (std::uint64_t phi = 0; phi < 8; ++phi) {
        auto s = phase_basis_state(l, phi);
        reflect_good(s, w);
        auto [idx, amp] = single_support(s);
        CHECK(extract_bits(idx, l.phase_register()) == phi);
        const double want = (phi >= 3 && phi < 7) ? -1.0 : 1.0;
        CHECK(std::abs(amp - cplx{want, 0.0}) < 1e-12);
        CHECK(((idx >> l.ancilla_left()) & 1ULL) == 0);
        CHECK(((idx >> l.ancilla_right()) & 1ULL) == 0);
    }
}

TEST_CASE("reflect_good is an involution and leaves ancillas on |00>") {
    RegisterLayout l{2, 4, false};
    const PhaseWindow w{5, 12, 0.0, 0.0, 4};
    auto s = random_state(l, 9);
    // zero out ancilla components so the precondition holds
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i >> l.ancilla_left()) & 1ULL || (i >> l.ancilla_right()) & 1ULL)
            s.amps[i] = cplx{0.0, 0.0};
    double nrm = std::sqrt(s.norm2());
    for (auto &a : s.amps)
        a /= nrm;
    const auto before = s.amps;
    reflect_good(s, w);
    // ancilla marginal: all mass on |00>
    const auto anc = register_distribution(s, {l.ancilla_left(), l.ancilla_right()});
    CHECK(anc.at(0) == Catch::Approx(1.0).margin(1e-12));
    reflect_good(s, w);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        CHECK(std::abs(s.amps[i] - before[i]) < 1e-12);
}

TEST_CASE("reflect_good rejects dirty ancillas and empty windows") {
    RegisterLayout l{1, 3, false};
    auto s = phase_basis_state(l, 1);
    CHECK_THROWS_AS(reflect_good(s, PhaseWindow{3, 3, 0.0, 0.0, 3}), validation_error);
    apply_x(s, l.ancilla_left());
    CHECK_THROWS_AS(reflect_good(s, PhaseWindow{3, 7, 0.0, 0.0, 3}), validation_error);
}

TEST_CASE("reflection is diagonal with the window sign pattern") {
    RegisterLayout l{1, 3, false};
    const PhaseWindow w{2, 5, 0.0, 0.0, 3};
    auto s = random_state(l, 10);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i >> l.ancilla_left()) & 1ULL || (i >> l.ancilla_right()) & 1ULL)
            s.amps[i] = cplx{0.0, 0.0};
    const auto before = s.amps;
    reflect_good(s, w);
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        const std::uint64_t phi = extract_bits(i, l.phase_register());
        const double sign = w.contains(phi) ? -1.0 : 1.0;
        CHECK(std::abs(s.amps[i] - sign * before[i]) < 1e-12);
    }
}

TEST_CASE("randomized spot checks at m = 10") {
    RegisterLayout l{1, 10, false};
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        const std::uint64_t a = rng() % 1024;
        const std::uint64_t b = rng() % 1024;
        const PhaseWindow w{std::min(a, b), std::max(a, b) + 1, 0.0, 0.0, 10};
        const std::uint64_t phi = rng() % 1024;
        auto s = phase_basis_state(l, phi);
        reflect_good(s, w);
        auto [idx, amp] = single_support(s);
        const double want = w.contains(phi) ? -1.0 : 1.0;
        CHECK(std::abs(amp - cplx{want, 0.0}) < 1e-12);
    }
}

TEST_CASE("the full-grid window is a pure global phase") {
    RegisterLayout l{1, 4, false};
    const PhaseWindow w{0, 16, 0.0, 0.0, 4};
    auto s = random_state(l, 12);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        if ((i >> l.ancilla_left()) & 1ULL || (i >> l.ancilla_right()) & 1ULL)
            s.amps[i] = cplx{0.0, 0.0};
    double nrm = std::sqrt(s.norm2());
    for (auto &a : s.amps)
        a /= nrm;
    const auto before = s.amps;
    reflect_good(s, w);
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        overlap += std::conj(before[i]) * s.amps[i];
    CHECK(std::abs(overlap) == Catch::Approx(1.0).margin(1e-12)); // fidelity 1
    CHECK(overlap.real() == Catch::Approx(-1.0).margin(1e-12));   // global -1
}

TEST_CASE("debug trace walks the five comparator steps") {
    RegisterLayout l{1, 3, false};
    const std::uint64_t phi = 5, phi_l = 3, phi_r = 7;
    const PhaseWindow w{phi_l, phi_r, 0.0, 0.0, 3};
    auto s = phase_basis_state(l, phi);
    std::vector<std::string> labels;
    reflect_good(s, w, [&](const char *label, const QuantumState &st) {
        labels.emplace_back(label);
        auto [idx, amp] = single_support(st);
        const std::uint64_t p = extract_bits(idx, l.phase_register());
        const bool a1 = (idx >> l.ancilla_left()) & 1ULL;
        const bool a2 = (idx >> l.ancilla_right()) & 1ULL;
        if (labels.back() == "sub-left") {
            CHECK(p == (phi - phi_l) % 8);
            CHECK(a1 == false); // sgn_b(5 - 3 >= 0) = 0
        } else if (labels.back() == "not-left") {
            CHECK(a1 == true); // now holds [phi >= phi_l]
        } else if (labels.back() == "restore-main") {
            CHECK(p == phi);
        } else if (labels.back() == "sub-right") {
            CHECK(p == (phi + 8 - phi_r) % 8);
            CHECK(a2 == true); // sgn_b(5 - 7 < 0) = 1
        } else if (labels.back() == "controlled-z") {
            CHECK(amp.real() == Catch::Approx(-1.0)); // both ancillas set
        } else if (labels.back() == "uncompute") {
            CHECK(p == phi);
            CHECK(a1 == false);
            CHECK(a2 == false);
            CHECK(amp.real() == Catch::Approx(-1.0));
        }
    });
    CHECK(labels == std::vector<std::string>{"sub-left", "not-left", "restore-main",
                                             "sub-right", "controlled-z", "uncompute"});
}

TEST_CASE("good_probability sums the windowed phase mass") {
    const auto map = build_phase_map(1.0, 5, PhaseMap::Kind::exponential);
    std::vector<std::uint64_t> phases;
    for (std::uint64_t j = 0; j < 16; ++j)
        phases.push_back(j);
    auto [a, spec] = synthesize_on_grid(4, 5, map, phases, 0, BasisKind::fourier);
    auto ctx = make_ces(spec, map);
    const auto state = run_ces(ctx, 3);

    // full grid
    CHECK(good_probability(state, PhaseWindow{0, 32, 0.0, 0.0, 5}) ==
          Catch::Approx(1.0).margin(1e-12));

    // single phase: fourier basis has |v_uj|^2 = 1/16 exactly
    CHECK(good_probability(state, PhaseWindow{4, 5, 0.0, 0.0, 5}) ==
          Catch::Approx(1.0 / 16.0).margin(1e-12));

    // k phases out of N: k/N
    CHECK(good_probability(state, PhaseWindow{4, 9, 0.0, 0.0, 5}) ==
          Catch::Approx(5.0 / 16.0).margin(1e-12));
}

TEST_CASE("good_set collects indices inside the interval") {
    Spectrum s;
    s.eigenvalues = {0.9, 0.5, 0.1, -0.4};
    s.basis = DenseMatrix::identity(4);
    const auto g = good_set(s, 0.1, 0.9);
    CHECK(g.k() == 2);
    CHECK(g.indices == std::vector<std::size_t>{1, 2});
}

TEST_CASE("adder gate-cost model counts Draper-style operations") {
    CHECK(qc_adder_gate_cost(1) == 2);
    CHECK(qc_adder_gate_cost(4) == 14); // Theta(w^2) controlled-phase gates
    CHECK(qc_adder_gate_cost(8) > qc_adder_gate_cost(4));
}
