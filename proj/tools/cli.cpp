#include "cli.hpp"

#include "fou/clark_ocone.hpp"
#include "fou/girsanov.hpp"
#include "fou/grid.hpp"
#include "fou/kernel.hpp"
#include "fou/lsi.hpp"
#include "fou/malliavin.hpp"
#include "fou/parallel.hpp"
#include "fou/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace fou::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    double hurst = 0.75;
    double alpha = 1.0;
    int steps = 256;
    int paths = 10000;
    std::uint64_t seed = 42;
    int dim = 1;
    int threads = 0;
    std::string functional = "linear";
    std::string direction = "const1";
    std::string output = "-";
    std::string format = "json";
    std::string config_path;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool mc, int min_paths = 100) {
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--hurst", cfg.hurst, "Hurst parameter in (0.5, 1)")
        ->check(CLI::Range(0.5, 1.0));
    cmd->add_option("--steps", cfg.steps, "grid steps (>= 16)")->check(CLI::Range(16, 1 << 20));
    cmd->add_option("--seed", cfg.seed, "master seed")->envname("FOU_SEED");
    cmd->add_option("--threads", cfg.threads, "worker thread cap (0 = hardware)");
    cmd->add_option("--output,-o", cfg.output, "output path ('-' = stdout)");
    cmd->add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp field from reports");
    cmd->add_option("--config", cfg.config_path,
                    "flat key=value file; flags take precedence over file values");
    if (mc) {
        cmd->add_option("--alpha", cfg.alpha, "mean reversion rate")->check(CLI::NonNegativeNumber);
        cmd->add_option("--paths", cfg.paths, "Monte Carlo paths")
            ->check(CLI::Range(min_paths, 100000000));
    }
}

// Flat key=value config support: values are injected as synthetic flags right
// after the subcommand token, so later (real) flags win under TakeLast.
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    if (args.empty()) return args;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        tokens.push_back("--" + key);
        tokens.push_back(val);
    }
    std::vector<std::string> out;
    out.push_back(args[0]);   // subcommand name
    out.insert(out.end(), tokens.begin(), tokens.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

json base_report(const RunConfig& cfg) {
    json j;
    j["hurst"] = cfg.hurst;
    j["alpha"] = cfg.alpha;
    j["steps"] = cfg.steps;
    j["paths"] = cfg.paths;
    j["seed"] = cfg.seed;
    j["dim"] = cfg.dim;
    j["threads"] = cfg.threads;
    j["functional"] = cfg.functional;
    j["direction"] = cfg.direction;
    if (!cfg.no_timestamp) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    }
    return j;
}

int write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output path: " << path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

int write_report(const RunConfig& cfg, const json& j) {
    return write_text(cfg.output, j.dump(2) + "\n");
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_simulate(const RunConfig& cfg, bool per_path, const std::string& scheme) {
    HurstParam H(cfg.hurst);
    TimeGrid grid = make_grid(cfg.steps);
    DiscreteKernel kernel = kernel_matrix(H, grid);
    ModelParams params(H, cfg.alpha, cfg.dim);
    FouScheme sch = scheme == "exact-exp" ? FouScheme::exact_exp : FouScheme::euler;

    auto header = [&](bool with_id) {
        std::string h = with_id ? "path_id,t" : "t";
        for (const char* base : {"bm", "fbm", "fou"})
            for (int d = 1; d <= cfg.dim; ++d) h += "," + std::string(base) + "_" + std::to_string(d);
        return h + "\n";
    };
    auto rows = [&](const PathBundle& b, int id, bool with_id) {
        std::string s;
        for (int k = 0; k <= cfg.steps; ++k) {
            if (with_id) s += std::to_string(id) + ",";
            s += fmt_g(grid.points[k]);
            for (const VecPath* p : {&b.bm, &b.fbm, &b.fou})
                for (int d = 0; d < cfg.dim; ++d) s += "," + fmt_g(p->at(k, d));
            s += "\n";
        }
        return s;
    };

    if (per_path) {
        if (cfg.output == "-") {
            std::cerr << "--per-path needs a file output stem\n";
            return 2;
        }
        for (int i = 0; i < cfg.paths; ++i) {
            PathBundle b = simulate_bundle(params, kernel, RngSpec{cfg.seed, (std::uint64_t)i}, sch);
            int rc = write_text(cfg.output + "_p" + std::to_string(i) + ".csv",
                                header(false) + rows(b, i, false));
            if (rc) return rc;
        }
        return 0;
    }
    std::string text = header(true);
    for (int i = 0; i < cfg.paths; ++i) {
        PathBundle b = simulate_bundle(params, kernel, RngSpec{cfg.seed, (std::uint64_t)i}, sch);
        text += rows(b, i, true);
    }
    return write_text(cfg.output, text);
}

int run_kernel_dump(const RunConfig& cfg) {
    HurstParam H(cfg.hurst);
    DiscreteKernel k = kernel_matrix(H, make_grid(cfg.steps));
    std::string text = "# H=" + fmt_g(cfg.hurst) + " n=" + std::to_string(cfg.steps) + "\n";
    for (int i = 0; i < cfg.steps; ++i) {
        for (int j = 0; j < cfg.steps; ++j) {
            if (j) text += ",";
            text += fmt_g(k.at(i, j));
        }
        text += "\n";
    }
    return write_text(cfg.output, text);
}

int run_verify_ibp(const RunConfig& cfg) {
    HurstParam H(cfg.hurst);
    DiscreteKernel kernel = kernel_matrix(H, make_grid(cfg.steps));
    ModelParams params(H, cfg.alpha, cfg.dim);
    CylindricalFunctional F = make_functional(cfg.functional, cfg.dim);
    IbpReport r = ibp_check(F, cfg.direction, params, kernel, cfg.paths, RngSpec{cfg.seed, 0});

    json j = base_report(cfg);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["se_lhs"] = r.se_lhs;
    j["se_rhs"] = r.se_rhs;
    j["se"] = r.se_diff;
    j["z"] = r.z_score;
    bool pass = std::fabs(r.z_score) <= 3.0;
    j["pass"] = pass;
    int rc = write_report(cfg, j);
    return rc ? rc : (pass ? 0 : 1);
}

int run_verify_co(const RunConfig& cfg, const std::string& estimator, int basis_degree,
                  double max_ratio) {
    HurstParam H(cfg.hurst);
    DiscreteKernel kernel = kernel_matrix(H, make_grid(cfg.steps));
    ModelParams params(H, cfg.alpha, cfg.dim);
    CylindricalFunctional F = make_functional(cfg.functional, cfg.dim);
    EstimatorConfig ec;
    ec.kind = estimator == "regression" ? Estimator::regression : Estimator::exact;
    ec.basis_degree = basis_degree;
    RepresentationReport r =
        representation_check(F, params, kernel, cfg.paths, RngSpec{cfg.seed, 0}, ec);

    json j = base_report(cfg);
    j["estimator"] = r.estimator;
    j["basis_degree"] = basis_degree;
    j["e_f"] = r.e_f;
    j["var_f"] = r.var_f;
    j["residual_var_ratio"] = r.residual_var_ratio;
    j["max_ratio"] = max_ratio;
    bool pass = r.residual_var_ratio <= max_ratio;
    j["pass"] = pass;
    int rc = write_report(cfg, j);
    return rc ? rc : (pass ? 0 : 1);
}

json constants_row(const RunConfig& cfg, double hurst, double alpha) {
    HurstParam H(hurst);
    KernelConstants kc = kernel_constants(H);
    LSIConstants c = lsi_constants(H, alpha, kc);
    json j;
    j["hurst"] = hurst;
    j["alpha"] = alpha;
    j["c_h"] = c.c_H;
    j["c1"] = c.C1;
    j["c2"] = c.C2;
    j["c_big"] = c.C;
    j["c_hat"] = c.C_hat;
    j["lsi_factor"] = c.lsi_factor;
    if (!cfg.no_timestamp) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    }
    return j;
}

int run_lsi_constant(const RunConfig& cfg, bool have_h, bool have_a) {
    if (have_h && have_a) return write_report(cfg, constants_row(cfg, cfg.hurst, cfg.alpha));
    json arr = json::array();
    for (double h : {0.6, 0.75, 0.9})
        for (double a : {0.0, 0.5, 1.0}) arr.push_back(constants_row(cfg, h, a));
    return write_text(cfg.output, arr.dump(2) + "\n");
}

int run_lsi_check(const RunConfig& cfg, bool all_functionals) {
    HurstParam H(cfg.hurst);
    DiscreteKernel kernel = kernel_matrix(H, make_grid(cfg.steps));
    KernelConstants kc = kernel_constants(H);
    ModelParams params(H, cfg.alpha, cfg.dim);

    std::vector<std::string> labels =
        all_functionals ? functional_labels() : std::vector<std::string>{cfg.functional};
    json arr = json::array();
    bool any_fail = false;
    std::uint64_t stream = 0;
    for (const std::string& lab : labels) {
        CylindricalFunctional F = make_functional(lab, cfg.dim);
        EntropyReport r = lsi_check(F, params, kernel, kc, cfg.paths, RngSpec{cfg.seed, stream});
        stream += (std::uint64_t)cfg.paths;
        json j = base_report(cfg);
        j["functional"] = lab;
        j["entropy"] = r.entropy;
        j["rhs"] = r.rhs;
        j["margin"] = r.margin;
        j["se"] = r.se;
        j["grad_norm_sq"] = r.grad_norm_sq;
        j["lsi_factor"] = lsi_constants(H, cfg.alpha, kc).lsi_factor;
        bool pass = r.margin >= -3.0 * r.se;
        j["pass"] = pass;
        any_fail = any_fail || !pass;
        arr.push_back(j);
    }
    int rc = write_text(cfg.output, arr.dump(2) + "\n");
    return rc ? rc : (any_fail ? 1 : 0);
}

int run_selftest() {
    auto check = [](bool ok, const char* what) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
        if (!ok) throw std::runtime_error(what);
    };
    TimeGrid g = make_grid(64);
    check(g.points.front() == 0.0 && g.points.back() == 1.0, "grid endpoints");
    bool threw = false;
    try {
        make_grid(1);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    check(threw, "n_steps=1 rejected");

    HurstParam H(0.75);
    check(eval_kernel(H, 0.5, 0.7) == 0.0, "kernel causality");
    check(eval_kernel(H, 1.0, 0.3) > 0.0, "kernel positivity");

    DiscreteKernel k = kernel_matrix(H, g);
    bool tri = true;
    for (int i = 0; i < k.n(); ++i)
        for (int j = i + 1; j < k.n(); ++j) tri = tri && k.at(i, j) == 0.0;
    check(tri, "matrix lower triangular");

    std::vector<double> h(g.n_steps, 1.0);
    std::vector<double> kh = apply_K(k, h, 1);
    std::vector<double> back = apply_K_inverse_matrix(k, kh, 1);
    double err = 0.0;
    for (int i = 0; i < g.n_steps; ++i) err = std::max(err, std::fabs(back[i] - 1.0));
    check(err < 1e-10, "K^-1 K round trip");

    PullbackDrift pd = pullback_drift(h, 0.0, k, 1);
    std::vector<double> j0 = j_integrand(pd, k, 1);
    double jerr = 0.0;
    for (int i = 0; i < g.n_steps; ++i) jerr = std::max(jerr, std::fabs(j0[i] - 1.0));
    check(jerr < 1e-10, "alpha=0 gives j = h");

    std::vector<double> inc(g.n_steps, 0.01);
    GirsanovDensity gd = girsanov_density(j0, inc, g, 1, 0.0);
    check(gd.rho[g.n_steps] == 1.0, "r=0 gives rho = 1");

    std::vector<double> hj = map_j_to_h(k, j0, 0.0, 1);
    double mjerr = 0.0;
    for (int i = 0; i < g.n_steps; ++i) mjerr = std::max(mjerr, std::fabs(hj[i] - j0[i]));
    check(mjerr < 1e-12, "alpha=0 gives h = j");

    KernelConstants kc{c_H(H), 1.0, -0.5};
    check(lsi_constants(H, 0.0, kc).lsi_factor == 4.0, "lsi_factor(alpha=0) = 4");

    std::vector<double> constG(100, 2.5);
    EntropyStats es = entropy_plugin(constG);
    check(es.degenerate && es.entropy == 0.0, "constant-data entropy = 0");

    CylindricalFunctional F = make_functional("linear", 1);
    VecPath p(g, 1);
    p.at(g.n_steps, 0) = 0.3;
    check(std::fabs(eval_functional(F, p) - 0.3) < 1e-15, "linear functional eval");
    return 0;
}

} // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"fractional Ornstein-Uhlenbeck verification toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool per_path = false, all_functionals = true, have_h = false, have_a = false;
    std::string scheme = "euler", estimator = "exact";
    int basis_degree = 3;
    double max_ratio = 0.1;

    CLI::App* sim = app.add_subcommand("simulate", "sample B, B^H and the fOU path to CSV");
    add_common(sim, cfg, true, 1);
    sim->add_option("--dim", cfg.dim, "path dimension")->check(CLI::Range(1, 64));
    sim->add_option("--scheme", scheme, "fOU step scheme")
        ->check(CLI::IsMember({"euler", "exact-exp"}));
    sim->add_flag("--per-path", per_path, "one CSV per path instead of long format");

    CLI::App* kd = app.add_subcommand("kernel-dump", "write the discretized kernel matrix as CSV");
    add_common(kd, cfg, false);

    CLI::App* ibp = app.add_subcommand("verify-ibp", "Monte Carlo integration-by-parts check");
    add_common(ibp, cfg, true);
    ibp->add_option("--functional", cfg.functional)->check(CLI::IsMember(functional_labels()));
    ibp->add_option("--direction", cfg.direction)->check(CLI::IsMember(direction_labels()));

    CLI::App* co = app.add_subcommand("verify-clark-ocone", "martingale representation residual");
    add_common(co, cfg, true);
    co->add_option("--functional", cfg.functional)->check(CLI::IsMember(functional_labels()));
    co->add_option("--estimator", estimator)->check(CLI::IsMember({"exact", "regression"}));
    co->add_option("--basis-degree", basis_degree)->check(CLI::Range(1, 8));
    co->add_option("--max-ratio", max_ratio, "pass threshold on residual_var_ratio");

    CLI::App* lc = app.add_subcommand("lsi-constant", "explicit log-Sobolev constants");
    add_common(lc, cfg, false);
    lc->add_option("--alpha", cfg.alpha)->check(CLI::NonNegativeNumber);

    CLI::App* lk = app.add_subcommand("lsi-check", "entropy inequality suite");
    add_common(lk, cfg, true);
    lk->add_option("--functional", cfg.functional)->check(CLI::IsMember(functional_labels()));

    CLI::App* st = app.add_subcommand("selftest", "run the quick invariant suite");
    (void)st;

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = inject_config(args);
        std::vector<const char*> cargv{argv[0]};
        for (const std::string& a : args) cargv.push_back(a.c_str());
        app.parse((int)cargv.size(), cargv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    have_h = lc->count("--hurst") > 0;
    have_a = lc->count("--alpha") > 0;
    all_functionals = lk->count("--functional") == 0;
    if (cfg.threads > 0) set_thread_cap(cfg.threads);

    try {
        if (sim->parsed()) return run_simulate(cfg, per_path, scheme);
        if (kd->parsed()) return run_kernel_dump(cfg);
        if (ibp->parsed()) return run_verify_ibp(cfg);
        if (co->parsed()) return run_verify_co(cfg, estimator, basis_degree, max_ratio);
        if (lc->parsed()) return run_lsi_constant(cfg, have_h, have_a);
        if (lk->parsed()) return run_lsi_check(cfg, all_functionals);
        if (st->parsed()) return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace fou::cli
