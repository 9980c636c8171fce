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

#include <ostream>

#include <nlohmann/json.hpp>

#include "qpes/common.hpp"
#include "qpes/sampling_estimator.hpp"

namespace qpes {

/// Parameters of the four runtime formulas. All big-O constants are taken as
/// 1 and logarithms are base 2 (log ratios are base-independent).
struct CostParams {
    double n_dim = 2;  // N
    double sparsity = 1;
    double k = 1;
    double gamma = 1.0;
    double epsilon = 1.0;
    double delta = 1.0;
    double zeta = 1.0;
    double gap = 1.0;   // minimum eigenvalue gap inside the window
    double ratio = 0.5; // lambda_2 / lambda_1
    double a_max = 1.0;

    void validate() const {
        require(n_dim >= 1 && sparsity >= 1 && k >= 1, "N, s, k must be >= 1");
        require(k <= n_dim, "need k <= N");
        require(gamma > 0 && epsilon > 0 && delta > 0 && zeta > 0, "tolerances must be > 0");
        require(gap > 0 && a_max > 0, "gap and the matrix norm must be > 0");
        require(ratio > 0 && ratio < 1, "eigenvalue ratio must lie in (0, 1)");
    }
};

/// sqrt(N/k) * s * ||A||_max * max(1/eps, k/(gamma*gap))
inline double cost_pes(const CostParams &p) {
    p.validate();
    return std::sqrt(p.n_dim / p.k) * p.sparsity * p.a_max *
           std::max(1.0 / p.epsilon, p.k / (p.gamma * p.gap));
}

/// The unfiltered solver: the same query bound with every state good (k = N).
inline double cost_ces(const CostParams &p) {
    CostParams q = p;
    q.k = q.n_dim;
    return cost_pes(q);
}

/// N * s * k * |log eps| / |log(lambda_2/lambda_1)|
inline double cost_power(const CostParams &p) {
    p.validate();
    return p.n_dim * p.sparsity * p.k * std::abs(std::log2(p.epsilon)) /
           std::abs(std::log2(p.ratio));
}

/// N * s * log N / sqrt(eps); degenerates to 0 at N = 1 (log 1 = 0)
inline double cost_lanczos(const CostParams &p) {
    p.validate();
    return p.n_dim * p.sparsity * std::log2(p.n_dim) / std::sqrt(p.epsilon);
}

/// N^2 * s
inline double cost_qr(const CostParams &p) {
    p.validate();
    return p.n_dim * p.n_dim * p.sparsity;
}

/// Homogeneously spread spectrum: eps = delta = gap = 1/N,
/// lambda_2/lambda_1 = 1 - 1/N, everything else 1.
inline CostParams worst_case(double n_dim, double k = 1, double sparsity = 1) {
    require(n_dim >= 2, "worst-case substitutions need N >= 2");
    CostParams p;
    p.n_dim = n_dim;
    p.sparsity = sparsity;
    p.k = k;
    p.epsilon = 1.0 / n_dim;
    p.delta = 1.0 / n_dim;
    p.gap = 1.0 / n_dim;
    p.ratio = 1.0 - 1.0 / n_dim;
    p.gamma = 1.0;
    p.zeta = 1.0;
    p.a_max = 1.0;
    return p;
}

struct CostCurve {
    std::string method;
    std::string regime; // "query" or "with-sampling"
    std::vector<std::pair<double, double>> points; // (N, cost)
};

struct Crossover {
    std::string method_a;
    std::string method_b;
    std::string regime;
    double n_cross = 0.0;
};

enum class CurveSet { query, with_sampling, both };

namespace detail {

/// Circuit cost times the Hoeffding shot count. zeta = 1 is allowed here
/// (ln(2M) > 0), unlike the stricter budget_* entry points.
inline double sampled_cost(double circuit, double delta, double zeta, double outcomes) {
    return circuit * std::ceil(std::log(2.0 * outcomes / zeta) / (2.0 * delta * delta));
}

inline double curve_value(const std::string &method, const std::string &regime, double n,
                          double k, double s) {
    const CostParams p = worst_case(n, k, s);
    double v = 0.0;
    if (method == "PES")
        v = cost_pes(p);
    else if (method == "CES")
        v = cost_ces(p);
    else if (method == "Power")
        v = cost_power(p);
    else if (method == "Lanczos")
        v = cost_lanczos(p);
    else if (method == "QR")
        v = cost_qr(p);
    else
        throw validation_error("unknown curve method " + method);
    if (regime == "with-sampling") {
        if (method == "PES")
            v = sampled_cost(v, p.gamma / p.k, p.zeta, p.k);
        else if (method == "CES")
            v = sampled_cost(v, p.gamma / p.n_dim, p.zeta, p.n_dim);
    }
    return v;
}

} // namespace detail

struct ScalingStudy {
    std::vector<CostCurve> curves;
    std::vector<Crossover> crossovers;
    nlohmann::json metadata;
};

/// Evaluates the five worst-case curves on a geometric N grid and locates
/// every pairwise crossover by bisection in log N (to 1% in N).
inline ScalingStudy scaling_study(double n_min, double n_max, double k, double s,
                                  CurveSet set = CurveSet::both) {
    require(n_min >= 2 && n_max >= n_min, "need 2 <= n_min <= n_max");
    require(k >= 1 && s >= 1, "k and s must be >= 1");

    std::vector<double> grid;
    for (double n = n_min; n < n_max; n *= 2.0)
        grid.push_back(n);
    grid.push_back(n_max);

    static const std::vector<std::string> kMethods = {"PES", "Power", "Lanczos", "CES", "QR"};
    std::vector<std::string> regimes;
    if (set == CurveSet::query || set == CurveSet::both)
        regimes.push_back("query");
    if (set == CurveSet::with_sampling || set == CurveSet::both)
        regimes.push_back("with-sampling");

    ScalingStudy study;
    for (const auto &regime : regimes)
        for (const auto &method : kMethods) {
            CostCurve c{method, regime, {}};
            for (double n : grid)
                c.points.emplace_back(n, detail::curve_value(method, regime, n, k, s));
            study.curves.push_back(std::move(c));
        }

    // pairwise crossovers per regime, bisected on the continuous formulas
    for (const auto &regime : regimes) {
        for (std::size_t i = 0; i < kMethods.size(); ++i)
            for (std::size_t j = i + 1; j < kMethods.size(); ++j) {
                auto diff = [&](double n) {
                    return std::log(detail::curve_value(kMethods[i], regime, n, k, s)) -
                           std::log(detail::curve_value(kMethods[j], regime, n, k, s));
                };
                for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
                    double lo = grid[g], hi = grid[g + 1];
                    double flo = diff(lo), fhi = diff(hi);
                    if (flo == 0.0)
                        flo = -fhi; // grid point exactly on the crossing
                    if (flo * fhi >= 0.0)
                        continue;
                    while (hi / lo > 1.01) {
                        const double mid = std::sqrt(lo * hi);
                        const double fmid = diff(mid);
                        if (fmid == 0.0) {
                            lo = hi = mid;
                            break;
                        }
                        if (fmid * flo < 0.0)
                            hi = mid;
                        else {
                            lo = mid;
                            flo = fmid;
                        }
                    }
                    study.crossovers.push_back(
                        {kMethods[i], kMethods[j], regime, std::sqrt(lo * hi)});
                }
            }
    }

    study.metadata = nlohmann::json{
        {"substitutions",
         "worst case: eps = delta = gap = 1/N, lambda2/lambda1 = 1 - 1/N, "
         "gamma = zeta = a_max = 1"},
        {"constants", "all big-O constants set to 1; absolute crossover N values are "
                      "model artifacts"},
        {"log_base", "2 (log ratios are base-independent)"},
        {"with_sampling_composition",
         "circuit cost x Hoeffding shots ceil(ln(2M/zeta)/(2 delta^2)); "
         "delta = gamma/N, M = N for CES and delta = gamma/k, M = k for PES"},
        {"memory_model", "classical O(N*s) matrix words vs ceil(log2 N) + m + 2 qubits"},
        {"k", k},
        {"s", s},
    };
    return study;
}

inline void write_curves_csv(std::ostream &out, const ScalingStudy &study) {
    out << "method,N,cost,regime\r\n";
    for (const auto &c : study.curves)
        for (const auto &[n, cost] : c.points)
            out << c.method << "," << format_double(n) << "," << format_double(cost) << ","
                << c.regime << "\r\n";
}

inline void write_crossovers_csv(std::ostream &out, const ScalingStudy &study) {
    out << "method_a,method_b,N_cross,regime\r\n";
    for (const auto &x : study.crossovers)
        out << x.method_a << "," << x.method_b << "," << format_double(x.n_cross) << ","
            << x.regime << "\r\n";
}

// ---------------------------------------------------------------------------
// Log-log SVG plot with labeled crossovers.
// ---------------------------------------------------------------------------

inline void write_scaling_svg(std::ostream &out, const ScalingStudy &study) {
    const double width = 960, height = 640;
    const double ml = 70, mr = 230, mt = 40, mb = 60;
    double xmin = 1e300, xmax = 0, ymin = 1e300, ymax = 0;
    for (const auto &c : study.curves)
        for (const auto &[n, cost] : c.points) {
            xmin = std::min(xmin, n);
            xmax = std::max(xmax, n);
            if (cost > 0) {
                ymin = std::min(ymin, cost);
                ymax = std::max(ymax, cost);
            }
        }
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    auto sx = [&](double n) {
        return ml + (std::log10(n) - lx0) / std::max(1e-12, lx1 - lx0) * (width - ml - mr);
    };
    auto sy = [&](double c) {
        return height - mb -
               (std::log10(c) - ly0) / std::max(1e-12, ly1 - ly0) * (height - mt - mb);
    };
    static const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                     "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">Worst-case runtime scaling</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
        const double x = sx(std::pow(10.0, e));
        out << "<line x1=\"" << x << "\" y1=\"" << height - mb << "\" x2=\"" << x << "\" y2=\""
            << height - mb + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
        const double y = sy(std::pow(10.0, e));
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    out << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">matrix size N"
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + (height - mt - mb) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << (mt + (height - mt - mb) / 2)
        << ")\">runtime t</text>\n";

    std::size_t ci = 0;
    double legend_y = mt + 10;
    for (const auto &c : study.curves) {
        const char *color = kPalette[ci % 10];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" stroke-dasharray=\""
            << (c.regime == "with-sampling" ? "6,4" : "") << "\" points=\"";
        for (const auto &[n, cost] : c.points)
            if (cost > 0)
                out << sx(n) << "," << sy(cost) << " ";
        out << "\"/>\n";
        out << "<line x1=\"" << width - mr + 14 << "\" y1=\"" << legend_y << "\" x2=\""
            << width - mr + 44 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"2\" stroke-dasharray=\""
            << (c.regime == "with-sampling" ? "6,4" : "") << "\"/>\n";
        out << "<text x=\"" << width - mr + 50 << "\" y=\"" << legend_y + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.method << " ("
            << c.regime << ")</text>\n";
        legend_y += 18;
        ++ci;
    }
    for (const auto &x : study.crossovers) {
        const double v = detail::curve_value(
            x.method_a, x.regime, x.n_cross,
            study.metadata.at("k").get<double>(), study.metadata.at("s").get<double>());
        if (x.n_cross < xmin || x.n_cross > xmax || v <= 0)
            continue;
        out << "<circle cx=\"" << sx(x.n_cross) << "\" cy=\"" << sy(v)
            << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << sx(x.n_cross) + 6 << "\" y=\"" << sy(v) - 6
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << x.method_a << "/"
            << x.method_b << " N=" << static_cast<long long>(std::llround(x.n_cross))
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace qpes
