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

#include "qpes/phase_map.hpp"

using namespace qpes;

TEST_CASE("exponential map endpoints") {
    const auto f = build_phase_map(1.0, 4, PhaseMap::Kind::exponential);
    CHECK(f.f(-1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(f.f(0.0) == Catch::Approx(kPi / 2).margin(1e-15));
    CHECK(f.f(1.0) == Catch::Approx(kPi).margin(1e-15));
    CHECK(f.f(1.0 - 1e-9) < kPi); // image stays below pi inside the interval
}

TEST_CASE("walk map endpoints and monotonicity") {
    const auto f = build_phase_map(1.0, 4, PhaseMap::Kind::walk);
    CHECK(f.f(0.0) == Catch::Approx(kPi / 2).margin(1e-15));
    CHECK(f.f(1.0) == Catch::Approx(0.0).margin(1e-15));
    for (double lam = -0.9; lam < 0.9; lam += 0.1)
        CHECK(f.f(lam) > f.f(lam + 0.1)); // decreasing
}

TEST_CASE("f_inv . f is the identity on [-alpha, alpha]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto kind : {PhaseMap::Kind::exponential, PhaseMap::Kind::walk}) {
        const double alpha = 2.5;
        const auto f = build_phase_map(alpha, 6, kind);
        for (int i = 0; i < 100; ++i) {
            const double lam = alpha * unif(rng);
            CHECK(f.f_inv(f.f(lam)) == Catch::Approx(lam).margin(1e-12));
        }
    }
}

TEST_CASE("on-grid phases recover eigenvalues exactly through the grid") {
    const auto f = build_phase_map(1.0, 5, PhaseMap::Kind::exponential);
    for (std::uint64_t phi = 0; phi <= 16; ++phi) {
        const double lam = f.lambda_at(phi);
        CHECK(f.grid_coordinate(lam) == Catch::Approx(static_cast<double>(phi)).margin(1e-10));
        CHECK(f.on_invertible_grid(phi));
    }
    CHECK_FALSE(f.on_invertible_grid(17));
    const auto w = build_phase_map(1.0, 5, PhaseMap::Kind::walk);
    CHECK_FALSE(w.on_invertible_grid(0));
    CHECK_FALSE(w.on_invertible_grid(16));
    CHECK(w.on_invertible_grid(15));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(build_phase_map(0.0, 4, PhaseMap::Kind::exponential), validation_error);
    CHECK_THROWS_AS(build_phase_map(-1.0, 4, PhaseMap::Kind::walk), validation_error);
    CHECK_THROWS_AS(build_phase_map(1.0, 0, PhaseMap::Kind::exponential), validation_error);
}
