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

#include <optional>
#include <ostream>

#include "qpes/common.hpp"

namespace qpes {

/// One result row in the shared schema used by the quantum estimator and the
/// classical baselines. Missing fields print empty. RFC 4180: CRLF line
/// endings, %.17g numbers.
struct ResultRow {
    std::optional<std::uint64_t> phi;
    std::optional<double> lambda_hat;
    std::optional<double> amp_sq_hat;
    std::optional<double> ci_halfwidth;
    std::optional<std::uint64_t> count;
    bool in_window = true;
};

inline constexpr const char *kResultCsvHeader = "phi,lambda_hat,amp_sq_hat,ci_halfwidth,count,in_window";

inline void write_result_csv(std::ostream &out, const std::vector<ResultRow> &rows) {
    out << kResultCsvHeader << "\r\n";
    auto num = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string{}; };
    auto integer = [](const std::optional<std::uint64_t> &v) {
        return v ? std::to_string(*v) : std::string{};
    };
    for (const auto &r : rows)
        out << integer(r.phi) << "," << num(r.lambda_hat) << "," << num(r.amp_sq_hat) << ","
            << num(r.ci_halfwidth) << "," << integer(r.count) << "," << (r.in_window ? 1 : 0)
            << "\r\n";
}

} // namespace qpes
