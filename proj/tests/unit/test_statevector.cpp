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

#include <cstdio>
#include <random>

#include "qpes/eig_oracle.hpp"
#include "qpes/quantum_state.hpp"

using namespace qpes;

namespace {

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

TEST_CASE("layout register arithmetic") {
    RegisterLayout l{3, 4, false};
    CHECK(l.total_qubits() == 3 + 4 + 2);
    CHECK(l.phase_qubit(0) == 3);
    CHECK(l.ancilla_left() == 7);
    CHECK(l.ancilla_right() == 8);
    RegisterLayout w{3, 4, true};
    CHECK(w.total_qubits() == 3 + 1 + 4 + 2);
    CHECK(w.flag_qubit() == 3);
    CHECK(w.phase_qubit(0) == 4);
}

TEST_CASE("prepare_basis_u sets the system bits") {
    RegisterLayout l{3, 2, false};
    const auto zero = prepare_basis_u(l, 0);
    CHECK(zero.amps[0] == cplx{1.0, 0.0});
    CHECK(zero.norm2() == Catch::Approx(1.0).margin(1e-15));

    const auto five = prepare_basis_u(l, 5);
    CHECK(five.amps[5] == cplx{1.0, 0.0}); // system bits 101, everything else 0
    CHECK_THROWS_AS(prepare_basis_u(l, 8), validation_error);
}

TEST_CASE("basis state expands with unit weight in the oracle eigenbasis") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<SparseHermitian::Entry> t;
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = r; c < 8; ++c)
            t.push_back({r, c, r == c ? cplx{gauss(rng), 0.0} : cplx{gauss(rng), gauss(rng)}});
    const SparseHermitian a(8, t);
    const auto s = eig_oracle(a);
    for (std::size_t u = 0; u < 8; ++u) {
        double total = 0.0;
        for (std::size_t j = 0; j < 8; ++j)
            total += std::norm(s.component(u, j));
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("apply_unitary identity and involution") {
    RegisterLayout l{2, 2, false};
    auto s = random_state(l, 1);
    const auto before = s.amps;

    apply_unitary(s, DenseMatrix::identity(4), {0, 1});
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        CHECK(std::abs(s.amps[i] - before[i]) < 1e-15);

    DenseMatrix x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    apply_unitary(s, x, {1});
    apply_unitary(s, x, {1});
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        CHECK(std::abs(s.amps[i] - before[i]) < 1e-15);
}

TEST_CASE("apply_unitary then its adjoint restores the state") {
    RegisterLayout l{2, 3, false};
    auto s = random_state(l, 2);
    const auto before = s.amps;
    const auto u = random_unitary(4, 33);
    // non-contiguous target set exercises the general kernel
    apply_unitary(s, u, {1, 3});
    apply_unitary(s, adjoint(u), {1, 3});
    double worst = 0.0;
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        worst = std::max(worst, std::abs(s.amps[i] - before[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("apply_unitary validates its input") {
    RegisterLayout l{2, 2, false};
    auto s = random_state(l, 3);
    DenseMatrix bad(2);
    bad(0, 0) = 2.0; // not unitary
    CHECK_THROWS_AS(apply_unitary(s, bad, {0}), validation_error);
    CHECK_THROWS_AS(apply_unitary(s, DenseMatrix::identity(4), {0}), validation_error);
}

TEST_CASE("controlled unitary acts only on control-set blocks") {
    RegisterLayout l{1, 1, false}; // 4 qubits total
    QuantumState s(l);
    s.amps[0] = cplx{1.0, 0.0};
    DenseMatrix x(2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    // control qubit 1 (phase) is 0: nothing happens
    apply_unitary(s, x, {0}, {1});
    CHECK(s.amps[0] == cplx{1.0, 0.0});
    // set the control, then the target flips
    apply_x(s, 1);
    apply_unitary(s, x, {0}, {1});
    CHECK(std::abs(s.amps[3] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("reflect_about_zero fixes |0> and negates the rest") {
    RegisterLayout l{1, 1, false};
    QuantumState s(l);
    s.amps[0] = cplx{1.0, 0.0};
    reflect_about_zero(s, {0});
    CHECK(s.amps[0] == cplx{1.0, 0.0});

    QuantumState one(l);
    one.amps[1] = cplx{1.0, 0.0};
    reflect_about_zero(one, {0});
    CHECK(one.amps[1] == cplx{-1.0, 0.0});

    auto r = random_state(l, 4);
    const auto before = r.amps;
    reflect_about_zero(r, {0, 2});
    reflect_about_zero(r, {0, 2});
    for (std::size_t i = 0; i < r.amps.size(); ++i)
        CHECK(std::abs(r.amps[i] - before[i]) < 1e-15);
}

TEST_CASE("register_distribution marginals") {
    RegisterLayout l{1, 1, false};
    QuantumState s(l);
    s.amps[0] = cplx{1.0, 0.0};
    auto d = register_distribution(s, {0});
    CHECK(d.size() == 1);
    CHECK(d[0] == Catch::Approx(1.0));

    apply_hadamard(s, 0);
    d = register_distribution(s, {0});
    CHECK(d[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(d[1] == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("marginal consistency: summing the joint equals the marginal") {
    RegisterLayout l{2, 2, false};
    const auto s = random_state(l, 6);
    const auto joint = register_distribution(s, {0, 1, 2, 3, 4, 5});
    const auto marginal = register_distribution(s, {1, 4});
    std::map<std::uint64_t, double> folded;
    for (const auto &[v, p] : joint) {
        const std::uint64_t key = ((v >> 1) & 1ULL) | (((v >> 4) & 1ULL) << 1);
        folded[key] += p;
    }
    for (const auto &[v, p] : marginal)
        CHECK(folded[v] == Catch::Approx(p).margin(1e-13));
    double total = 0.0;
    for (const auto &[v, p] : marginal)
        total += p;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sampling is deterministic and matched to the distribution") {
    RegisterLayout l{1, 1, false};
    QuantumState s(l);
    s.amps[2] = cplx{1.0, 0.0}; // deterministic outcome
    auto counts = sample(s, l.phase_register(), 1000, 42);
    REQUIRE(counts.size() == 1);
    CHECK(counts[1] == 1000);

    apply_hadamard(s, l.phase_qubit(0));
    const auto c1 = sample(s, {l.phase_qubit(0)}, 12345, 7);
    const auto c2 = sample(s, {l.phase_qubit(0)}, 12345, 7);
    CHECK(c1 == c2);

    // 1e5 shots on a half/half split: each bin within 5 sigma of 5e4
    const auto c3 = sample(s, {l.phase_qubit(0)}, 100000, 11);
    const double sigma = std::sqrt(100000.0 * 0.25);
    CHECK(std::abs(static_cast<double>(c3.at(0)) - 50000.0) <= 5.0 * sigma);
    CHECK(std::abs(static_cast<double>(c3.at(1)) - 50000.0) <= 5.0 * sigma);
    std::uint64_t total = 0;
    for (const auto &[v, c] : c3)
        total += c;
    CHECK(total == 100000);
}

TEST_CASE("norm is preserved through a random gate sequence") {
    RegisterLayout l{2, 3, false};
    auto s = random_state(l, 8);
    std::mt19937_64 rng(9);
    for (int step = 0; step < 25; ++step) {
        const int q = static_cast<int>(rng() % l.total_qubits());
        switch (rng() % 4) {
        case 0:
            apply_hadamard(s, q);
            break;
        case 1:
            apply_x(s, q);
            break;
        case 2:
            apply_controlled_phase(s, q, (q + 1) % l.total_qubits(), 0.7);
            break;
        default:
            apply_unitary(s, random_unitary(2, rng()), {q}, {}, false);
            break;
        }
        CHECK(std::abs(s.norm2() - 1.0) < 1e-12);
    }
}

TEST_CASE("kernels are bitwise independent of the worker count") {
    RegisterLayout l{6, 8, false}; // 2^16 amplitudes: large enough to chunk
    const auto u = random_unitary(8, 21);
    auto s1 = random_state(l, 10);
    auto s2 = s1;
    set_max_threads(1);
    apply_unitary(s1, u, {0, 1, 2});
    apply_hadamard(s1, 4);
    set_max_threads(4);
    apply_unitary(s2, u, {0, 1, 2});
    apply_hadamard(s2, 4);
    set_max_threads(1);
    for (std::size_t i = 0; i < s1.amps.size(); ++i) {
        CHECK(s1.amps[i].real() == s2.amps[i].real());
        CHECK(s1.amps[i].imag() == s2.amps[i].imag());
    }
}

TEST_CASE("state dump round-trips bitwise") {
    RegisterLayout l{2, 2, false};
    const auto s = random_state(l, 12);
    const std::string path = "state_dump_test.bin";
    dump_state(s, path);
    const auto r = load_state(path);
    REQUIRE(r.amps.size() == s.amps.size());
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        CHECK(r.amps[i].real() == s.amps[i].real());
        CHECK(r.amps[i].imag() == s.amps[i].imag());
    }
    std::remove(path.c_str());
}
