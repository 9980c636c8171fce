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

#include "qpes/common.hpp"

namespace qpes {

/// Invertible map between eigenvalues and eigenphases of the spectral
/// unitary, discretized on an m-bit phase grid.
///
/// exponential: f(lambda) = 2*pi*(lambda + alpha)/(4*alpha), increasing,
///              image [0, pi] on [-alpha, alpha]; a single QPE branch.
/// walk:        f(lambda) = arccos(lambda/alpha), decreasing, image (0, pi)
///              on (-alpha, alpha) strict; QPE sees +-f paired branches.
struct PhaseMap {
    enum class Kind { exponential, walk };

    Kind kind = Kind::exponential;
    double alpha = 1.0; // spectral bound, >= max |lambda_j|
    int m = 1;          // phase bits

    std::uint64_t grid_size() const { return std::uint64_t{1} << m; }

    /// eigenvalue -> phase in radians
    double f(double lambda) const {
        if (kind == Kind::exponential)
            return 2.0 * kPi * (lambda + alpha) / (4.0 * alpha);
        return std::acos(lambda / alpha);
    }

    /// phase in radians -> eigenvalue
    double f_inv(double theta) const {
        if (kind == Kind::exponential)
            return 4.0 * alpha * theta / (2.0 * kPi) - alpha;
        return alpha * std::cos(theta);
    }

    /// real-valued grid coordinate 2^m f(lambda)/(2 pi)
    double grid_coordinate(double lambda) const {
        return static_cast<double>(grid_size()) * f(lambda) / (2.0 * kPi);
    }

    /// eigenvalue encoded at integer grid phase phi
    double lambda_at(std::uint64_t phi) const {
        return f_inv(2.0 * kPi * static_cast<double>(phi) / static_cast<double>(grid_size()));
    }

    /// Integer phases phi for which lambda_at(phi) round-trips through f.
    /// exponential: [0, 2^(m-1)]; walk: [1, 2^(m-1) - 1].
    bool on_invertible_grid(std::uint64_t phi) const {
        const std::uint64_t half = grid_size() / 2;
        if (kind == Kind::exponential)
            return phi <= half;
        return phi >= 1 && phi + 1 <= half;
    }

    bool admits(double lambda) const {
        if (kind == Kind::exponential)
            return std::abs(lambda) <= alpha;
        return std::abs(lambda) < alpha;
    }
};

inline PhaseMap build_phase_map(double alpha, int m, PhaseMap::Kind kind) {
    require(alpha > 0.0, "phase map needs alpha > 0");
    require(m >= 1, "phase map needs m >= 1");
    return PhaseMap{kind, alpha, m};
}

} // namespace qpes
