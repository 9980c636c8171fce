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

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qpes {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Input failed a contract check (bad file, out-of-range parameter, ...).
class validation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not meet its tolerance or iteration budget.
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string &msg) {
    if (!cond)
        throw validation_error(msg);
}

/// FNV-1a 64-bit. Used for input hashes in run manifests and debug traces.
inline std::uint64_t fnv1a64(const void *data, std::size_t len,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto *p = static_cast<const unsigned char *>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_amplitudes(const std::vector<cplx> &amps) {
    return fnv1a64(amps.data(), amps.size() * sizeof(cplx));
}

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Worker pool configuration. Kernels split work into chunks whose boundaries
// depend only on the problem size, and every chunk writes disjoint memory, so
// results are bitwise identical for any worker count.
// ---------------------------------------------------------------------------

inline std::atomic<int> &max_threads_ref() {
    static std::atomic<int> v{1};
    return v;
}

inline void set_max_threads(int t) { max_threads_ref().store(t < 1 ? 1 : t); }

inline int max_threads() { return max_threads_ref().load(); }

/// Runs fn(begin, end) over [0, n) in fixed-size chunks, possibly on several
/// threads. fn must only write state derived from its own index range.
template <typename Fn> void parallel_for(std::size_t n, Fn &&fn) {
    const int workers = max_threads();
    constexpr std::size_t kChunk = std::size_t{1} << 14;
    if (workers <= 1 || n <= kChunk) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks)
                return;
            const std::size_t lo = c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            fn(lo, hi);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::size_t>(workers, chunks));
    pool.reserve(spawn);
    for (int t = 0; t < spawn - 1; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &th : pool)
        th.join();
}

} // namespace qpes
