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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "qpes/verification.hpp"

int main() {
    using clock = std::chrono::steady_clock;
    qpes::set_max_threads(4);

    const std::string artifacts = "acceptance_artifacts";
    std::filesystem::create_directories(artifacts);

    const std::vector<std::function<qpes::CheckResult()>> criteria = {
        [] { return qpes::check_comparator_exhaustive(5); },
        [] { return qpes::check_qpe_marginal(); },
        [] { return qpes::check_grover_exactness(); },
        [] { return qpes::check_estimator_statistics(200); },
        [] { return qpes::check_sampling_scaling(); },
        [] { return qpes::check_baselines(); },
        [&] { return qpes::check_scaling_figure(artifacts); },
        [] { return qpes::check_memory_claim(); },
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = clock::now();
        qpes::CheckResult r;
        try {
            r = criteria[i]();
        } catch (const std::exception &e) {
            r.name = "criterion " + std::to_string(i + 1);
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        std::printf("[%s] %zu. %s (%.1fs)\n    %s\n", r.pass ? "PASS" : "FAIL", i + 1,
                    r.name.c_str(), secs, r.detail.c_str());
        std::fflush(stdout);
        failures += r.pass ? 0 : 1;
    }
    if (failures > 0)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
