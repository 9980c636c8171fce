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

// Regenerates the checked-in fixture matrices. The N=16 circulant fixture has
// a fourier eigenbasis (|v_uj|^2 = 1/16 for every u, j) and eigenvalues on
// the odd points of the 6-bit exponential phase grid: lambda_j = (2j+1)/16 - 1.
// The window [-0.07, 0.07) captures exactly the pair {-0.0625, +0.0625}.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qpes/grid_synthesis.hpp"

int main(int argc, char **argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);

    const auto map = qpes::build_phase_map(1.0, 6, qpes::PhaseMap::Kind::exponential);
    std::vector<std::uint64_t> phases;
    for (std::uint64_t j = 0; j < 16; ++j)
        phases.push_back(2 * j + 1);
    auto [a, spec] = qpes::synthesize_on_grid(4, 6, map, phases, 0, qpes::BasisKind::fourier);

    {
        std::ofstream out(dir + "/n16_k2.json");
        qpes::save_json_fixture(a, out);
    }
    {
        std::ofstream out(dir + "/n16_k2.mtx");
        qpes::save_matrix_market(a, out);
    }
    std::cout << "wrote " << dir << "/n16_k2.json and " << dir << "/n16_k2.mtx (dim "
              << a.dim() << ", " << a.stored_entries() << " stored entries)\n";
    return 0;
}
