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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpes/qpes.hpp"
#include "qpes/verification.hpp"

namespace {

constexpr const char *kVersion = "0.1.0";

// exit codes: 0 ok, 1 usage, 2 validation, 3 numerical failure
enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

void emit_error(const std::string &type, const std::string &message) {
    nlohmann::json err{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

/// Optional JSON config: values act as defaults, explicit flags win.
struct ConfigDefaults {
    nlohmann::json j = nlohmann::json::object();

    static ConfigDefaults from_argv(int argc, char **argv) {
        ConfigDefaults c;
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") {
                std::ifstream in(argv[i + 1]);
                qpes::require(in.good(), std::string("cannot open config file ") + argv[i + 1]);
                in >> c.j;
            }
        return c;
    }

    template <typename T> T get(const std::string &key, T fallback) const {
        if (j.contains(key))
            return j.at(key).get<T>();
        return fallback;
    }
};

std::uint64_t file_hash(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    qpes::require(in.good(), "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return qpes::fnv1a64(bytes.data(), bytes.size());
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

qpes::SparseHermitian load_matrix_file(const std::string &path) {
    std::ifstream in(path);
    qpes::require(in.good(), "cannot open matrix file " + path);
    return qpes::load_matrix(in);
}

void write_distribution_csv(const std::string &path,
                            const std::map<std::uint64_t, double> &dist,
                            const std::vector<qpes::PhaseWindow> &windows) {
    std::ofstream out(path);
    out << "phi,probability,in_window\r\n";
    for (const auto &[phi, p] : dist) {
        bool in = windows.empty();
        for (const auto &w : windows)
            in = in || w.contains(phi);
        out << phi << "," << qpes::format_double(p) << "," << (in ? 1 : 0) << "\r\n";
    }
}

void write_manifest(const std::string &out_dir, const nlohmann::json &manifest) {
    std::ofstream out(out_dir + "/manifest.json");
    out << manifest.dump(2) << "\n";
}

struct SolverArgs {
    std::string matrix;
    std::uint64_t u = 0;
    double lambda_l = 0.0;
    double lambda_r = 0.0;
    int m = 6;
    std::string model = "exp";
    std::string shots = "auto";
    double gamma = 0.1;
    double zeta = 0.05;
    double alpha = 0.0; // 0: default to s * max|A|
    std::uint64_t seed = 1;
    std::string mode = "oracle";
    std::string out_dir = "out";
    int threads = 1;
    std::string config; // consumed separately; declared so CLI11 accepts it
};

void add_common_solver_options(CLI::App *cmd, SolverArgs &a, const ConfigDefaults &cfg,
                               bool with_window) {
    a.m = cfg.get("m", a.m);
    a.model = cfg.get("model", a.model);
    a.shots = cfg.get("shots", a.shots);
    a.gamma = cfg.get("gamma", a.gamma);
    a.zeta = cfg.get("zeta", a.zeta);
    a.alpha = cfg.get("alpha", a.alpha);
    a.seed = cfg.get("seed", a.seed);
    a.mode = cfg.get("mode", a.mode);
    a.out_dir = cfg.get("out", a.out_dir);
    a.threads = cfg.get("threads", a.threads);
    a.u = cfg.get("u", a.u);

    cmd->add_option("--matrix", a.matrix, "matrix file (.mtx or .json fixture)")->required();
    cmd->add_option("--u", a.u, "tracked eigenvector component index");
    if (with_window) {
        cmd->add_option("--lambda-l", a.lambda_l, "window left edge (inclusive)")->required();
        cmd->add_option("--lambda-r", a.lambda_r, "window right edge (exclusive)")->required();
    }
    cmd->add_option("--m", a.m, "phase register bits");
    cmd->add_option("--model", a.model, "spectral unitary model: exp | walk")
        ->check(CLI::IsMember({"exp", "walk"}));
    cmd->add_option("--shots", a.shots, "shot count or 'auto' (Hoeffding budget)");
    cmd->add_option("--gamma", a.gamma, "relative amplitude tolerance");
    cmd->add_option("--zeta", a.zeta, "failure probability");
    cmd->add_option("--alpha", a.alpha, "spectral bound (default s * max|A|)");
    cmd->add_option("--seed", a.seed, "sampling seed");
    cmd->add_option("--mode", a.mode, "iteration planning: oracle | worst")
        ->check(CLI::IsMember({"oracle", "worst"}));
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--threads", a.threads, "worker cap for the statevector kernels");
    cmd->add_option("--config", a.config, "JSON config file (flags override)");
}

nlohmann::json solver_config_json(const SolverArgs &a, bool with_window) {
    nlohmann::json j{{"matrix", a.matrix}, {"u", a.u},         {"m", a.m},
                     {"model", a.model},   {"shots", a.shots}, {"gamma", a.gamma},
                     {"zeta", a.zeta},     {"alpha", a.alpha}, {"seed", a.seed},
                     {"mode", a.mode},     {"out", a.out_dir}, {"threads", a.threads}};
    if (with_window) {
        j["lambda_l"] = a.lambda_l;
        j["lambda_r"] = a.lambda_r;
    }
    return j;
}

int run_solver(const SolverArgs &a, bool with_window) {
    qpes::set_max_threads(a.threads);
    const auto matrix = load_matrix_file(a.matrix);
    const auto spectrum = qpes::eig_oracle(matrix);

    const double alpha =
        a.alpha > 0.0 ? a.alpha
                      : matrix.max_abs() * static_cast<double>(matrix.sparsity());
    const auto kind =
        a.model == "walk" ? qpes::PhaseMap::Kind::walk : qpes::PhaseMap::Kind::exponential;
    const auto map = qpes::build_phase_map(alpha, a.m, kind);
    auto ctx = qpes::make_ces(spectrum, map);

    qpes::AAPlan plan;
    std::vector<qpes::PhaseWindow> windows;
    qpes::QuantumState state(ctx.layout);
    std::size_t k_good = spectrum.dim();
    if (with_window) {
        const auto mode = a.mode == "worst" ? qpes::AAPlan::Mode::worst_case
                                            : qpes::AAPlan::Mode::oracle_exact;
        auto res = qpes::run_pes(ctx, a.u, a.lambda_l, a.lambda_r, mode);
        plan = res.plan;
        windows = std::move(res.windows);
        state = std::move(res.state);
        k_good = res.good.k();
    } else {
        state = qpes::run_ces(ctx, a.u);
        plan.p0 = 1.0;
        plan.theta = qpes::kPi / 2.0;
    }

    qpes::SampleBudget budget;
    std::uint64_t shots = 0;
    if (a.shots == "auto") {
        budget = with_window ? qpes::budget_pes(k_good, a.gamma, a.zeta)
                             : qpes::budget_ces(spectrum.dim(), a.gamma, a.zeta);
        shots = budget.shots;
    } else {
        shots = std::stoull(a.shots);
        qpes::require(shots >= 1, "shot count must be >= 1");
    }

    const auto dist = qpes::register_distribution(state, ctx.layout.phase_register());
    const auto counts = qpes::sample_distribution(dist, shots, a.seed);
    const auto report = qpes::estimate_eigenpairs(counts, plan, map, windows, a.zeta);

    std::filesystem::create_directories(a.out_dir);
    {
        std::ofstream est(a.out_dir + "/estimates.csv");
        qpes::write_result_csv(est, qpes::to_result_rows(report));
    }
    write_distribution_csv(a.out_dir + "/distribution.csv", dist, windows);

    nlohmann::json manifest{
        {"command", with_window ? "pes" : "ces"},
        {"versions", {{"qpes", kVersion}}},
        {"config", solver_config_json(a, with_window)},
        {"input", {{"path", a.matrix}, {"fnv1a64", hex64(file_hash(a.matrix))}}},
        {"resolved",
         {{"alpha", alpha},
          {"shots", shots},
          {"shots_source", a.shots == "auto" ? "auto" : "explicit"},
          {"dim", spectrum.dim()},
          {"sparsity", matrix.sparsity()},
          {"k_good", k_good},
          {"plan",
           {{"t", plan.t},
            {"theta", plan.theta},
            {"p0", plan.p0},
            {"c", plan.predicted_c},
            {"mode", a.mode}}},
          {"qubits_total", ctx.layout.total_qubits()},
          {"qubits_breakdown",
           {{"system", ctx.layout.n},
            {"phase", ctx.layout.m},
            {"ancilla", 2},
            {"walk_flag", ctx.layout.walk_flag ? 1 : 0}}},
          {"classical_matrix_words", matrix.dim() * matrix.sparsity()},
          {"classical_matrix_stored_entries", matrix.stored_entries()},
          {"leakage_probability", report.leakage_probability}}},
        {"outputs", {"manifest.json", "estimates.csv", "distribution.csv"}}};
    write_manifest(a.out_dir, manifest);
    std::cout << "wrote " << a.out_dir << "/estimates.csv (" << report.estimates.size()
              << " estimates, " << shots << " shots, " << ctx.layout.total_qubits()
              << " qubits vs " << matrix.dim() * matrix.sparsity()
              << " classical matrix words)\n";
    return kOk;
}

struct ClassicalArgs {
    std::string matrix;
    std::string method = "power";
    std::size_t k = 1;
    std::size_t l = 0; // lanczos Krylov dimension; 0 = min(N, 2k+16)
    double tol = 1e-8;
    std::size_t max_iter = 5000;
    std::uint64_t u = 0;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string config;
};

int run_classical(const ClassicalArgs &a) {
    const auto matrix = load_matrix_file(a.matrix);
    std::vector<qpes::ResultRow> rows;
    nlohmann::json extra;

    if (a.method == "power") {
        const auto res = qpes::power_method_topk(matrix, a.k, a.tol, a.max_iter, a.seed);
        for (const auto &st : res.stages)
            rows.push_back({std::nullopt, st.lambda, std::norm(st.vector[a.u]), std::nullopt,
                            st.iterations, true});
        extra["all_converged"] = res.all_converged;
    } else if (a.method == "lanczos") {
        const std::size_t l = a.l > 0 ? a.l : std::min(matrix.dim(), 2 * a.k + 16);
        const auto res = qpes::lanczos_extremal(matrix, l, a.seed);
        for (std::size_t j = 0; j < std::min(a.k, res.ritz_values.size()); ++j)
            rows.push_back({std::nullopt, res.ritz_values[j],
                            std::norm(res.ritz_vectors[j][a.u]), std::nullopt, res.steps,
                            true});
        extra["krylov_dim"] = res.steps;
        extra["breakdown"] = res.breakdown;
        extra["model_cost_ops"] = res.model_cost_ops;
        extra["measured_cost_ops"] = res.measured_cost_ops;
    } else { // qr
        const auto spec = qpes::qr_eigensolver(matrix);
        for (std::size_t j = 0; j < std::min<std::size_t>(a.k, spec.dim()); ++j)
            rows.push_back({std::nullopt, spec.eigenvalues[j],
                            std::norm(spec.component(a.u, j)), std::nullopt, std::nullopt,
                            true});
    }

    std::filesystem::create_directories(a.out_dir);
    {
        std::ofstream est(a.out_dir + "/estimates.csv");
        qpes::write_result_csv(est, rows);
    }
    nlohmann::json manifest{
        {"command", "classical"},
        {"versions", {{"qpes", kVersion}}},
        {"config",
         {{"matrix", a.matrix},
          {"method", a.method},
          {"k", a.k},
          {"l", a.l},
          {"tol", a.tol},
          {"max_iter", a.max_iter},
          {"u", a.u},
          {"seed", a.seed},
          {"out", a.out_dir}}},
        {"input", {{"path", a.matrix}, {"fnv1a64", hex64(file_hash(a.matrix))}}},
        {"resolved",
         {{"dim", matrix.dim()},
          {"sparsity", matrix.sparsity()},
          {"classical_matrix_words", matrix.dim() * matrix.sparsity()},
          {"classical_matrix_stored_entries", matrix.stored_entries()},
          {"method_detail", extra}}},
        {"outputs", {"manifest.json", "estimates.csv"}}};
    write_manifest(a.out_dir, manifest);
    std::cout << "wrote " << a.out_dir << "/estimates.csv (" << rows.size() << " rows)\n";
    return kOk;
}

struct ScalingArgs {
    double n_min = 1 << 10;
    double n_max = 1 << 20;
    double k = 1;
    double s = 1;
    std::string curves = "both";
    std::string out_dir = "out";
    std::string config;
};

int run_scaling(const ScalingArgs &a) {
    const auto set = a.curves == "query"
                         ? qpes::CurveSet::query
                         : (a.curves == "with-sampling" ? qpes::CurveSet::with_sampling
                                                        : qpes::CurveSet::both);
    const auto study = qpes::scaling_study(a.n_min, a.n_max, a.k, a.s, set);
    std::filesystem::create_directories(a.out_dir);
    {
        std::ofstream f(a.out_dir + "/curves.csv");
        qpes::write_curves_csv(f, study);
    }
    {
        std::ofstream f(a.out_dir + "/crossovers.csv");
        qpes::write_crossovers_csv(f, study);
    }
    {
        std::ofstream f(a.out_dir + "/plot.svg");
        qpes::write_scaling_svg(f, study);
    }
    nlohmann::json manifest{
        {"command", "scaling"},
        {"versions", {{"qpes", kVersion}}},
        {"config",
         {{"n_min", a.n_min},
          {"n_max", a.n_max},
          {"k", a.k},
          {"s", a.s},
          {"curves", a.curves},
          {"out", a.out_dir}}},
        {"metadata", study.metadata},
        {"crossover_count", study.crossovers.size()},
        {"outputs", {"manifest.json", "curves.csv", "crossovers.csv", "plot.svg"}}};
    write_manifest(a.out_dir, manifest);
    std::cout << "wrote " << a.out_dir << "/curves.csv, crossovers.csv, plot.svg ("
              << study.crossovers.size() << " crossovers)\n";
    return kOk;
}

int run_verify(const std::string &suite, int m, int threads) {
    qpes::set_max_threads(threads);
    qpes::CheckResult r;
    if (suite == "comparator")
        r = qpes::check_comparator_exhaustive(m);
    else if (suite == "qpe")
        r = qpes::check_qpe_marginal();
    else if (suite == "aa")
        r = qpes::check_grover_exactness();
    else if (suite == "estimator")
        r = qpes::check_estimator_statistics(200);
    else
        r = qpes::check_baselines();
    std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << "\n    " << r.detail
              << "\n";
    return r.pass ? kOk : kNumerical;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"desk-scale eigenpair-solver simulator: windowed quantum phase "
                 "estimation with amplitude amplification, classical baselines, and "
                 "runtime cost models"};
    app.require_subcommand(1);

    ConfigDefaults cfg;
    try {
        cfg = ConfigDefaults::from_argv(argc, argv);
    } catch (const std::exception &e) {
        emit_error("validation", e.what());
        return kValidation;
    }

    SolverArgs pes_args, ces_args;
    auto *pes = app.add_subcommand("pes", "windowed (partial) eigenpair solver run");
    add_common_solver_options(pes, pes_args, cfg, true);
    auto *ces = app.add_subcommand("ces", "unfiltered (complete) eigenpair solver run");
    add_common_solver_options(ces, ces_args, cfg, false);

    ClassicalArgs cl_args;
    cl_args.method = cfg.get("method", cl_args.method);
    cl_args.k = cfg.get("k", cl_args.k);
    cl_args.tol = cfg.get("tol", cl_args.tol);
    cl_args.seed = cfg.get("seed", cl_args.seed);
    cl_args.out_dir = cfg.get("out", cl_args.out_dir);
    auto *cl = app.add_subcommand("classical", "classical baseline eigensolver run");
    cl->add_option("--matrix", cl_args.matrix, "matrix file")->required();
    cl->add_option("--method", cl_args.method, "power | lanczos | qr")
        ->check(CLI::IsMember({"power", "lanczos", "qr"}));
    cl->add_option("--k", cl_args.k, "number of eigenpairs");
    cl->add_option("--l", cl_args.l, "Krylov dimension (lanczos)");
    cl->add_option("--tol", cl_args.tol, "convergence tolerance");
    cl->add_option("--max-iter", cl_args.max_iter, "iteration cap per stage");
    cl->add_option("--u", cl_args.u, "tracked eigenvector component index");
    cl->add_option("--seed", cl_args.seed, "start-vector seed");
    cl->add_option("--out", cl_args.out_dir, "output directory");
    cl->add_option("--config", cl_args.config, "JSON config file (flags override)");

    ScalingArgs sc_args;
    sc_args.curves = cfg.get("curves", sc_args.curves);
    sc_args.out_dir = cfg.get("out", sc_args.out_dir);
    auto *sc = app.add_subcommand("scaling", "worst-case runtime crossover study");
    sc->add_option("--n-min", sc_args.n_min, "smallest N");
    sc->add_option("--n-max", sc_args.n_max, "largest N");
    sc->add_option("--k", sc_args.k, "window size k");
    sc->add_option("--s", sc_args.s, "row sparsity s");
    sc->add_option("--curves", sc_args.curves, "query | with-sampling | both")
        ->check(CLI::IsMember({"query", "with-sampling", "both"}));
    sc->add_option("--out", sc_args.out_dir, "output directory");
    sc->add_option("--config", sc_args.config, "JSON config file (flags override)");

    std::string vf_suite = "comparator";
    int vf_m = 5;
    int vf_threads = 1;
    auto *vf = app.add_subcommand("verify", "run an invariant suite and print pass/fail");
    vf->add_option("--suite", vf_suite, "comparator | qpe | aa | estimator | baselines")
        ->check(CLI::IsMember({"comparator", "qpe", "aa", "estimator", "baselines"}));
    vf->add_option("--m", vf_m, "phase bits for the exhaustive comparator scan");
    vf->add_option("--threads", vf_threads, "worker cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        emit_error("usage", e.what());
        return kUsage;
    }

    try {
        if (pes->parsed())
            return run_solver(pes_args, true);
        if (ces->parsed())
            return run_solver(ces_args, false);
        if (cl->parsed())
            return run_classical(cl_args);
        if (sc->parsed())
            return run_scaling(sc_args);
        return run_verify(vf_suite, vf_m, vf_threads);
    } catch (const qpes::validation_error &e) {
        emit_error("validation", e.what());
        return kValidation;
    } catch (const qpes::numerical_error &e) {
        emit_error("numerical", e.what());
        return kNumerical;
    } catch (const std::exception &e) {
        emit_error("numerical", e.what());
        return kNumerical;
    }
}
