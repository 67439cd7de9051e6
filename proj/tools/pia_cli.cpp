// pia: prior-independent auction analytics.
//
// Subcommands: ratio, verify, scan, optimize, simulate. Exit codes: 0 all
// checks passed, 1 a bound or certificate failed, 2 bad usage or inputs.
// A JSON config file (--config) mirrors the flags; explicit flags win.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pia/bounds.hpp"
#include "pia/monte_carlo.hpp"
#include "pia/search.hpp"
#include "pia/serialize.hpp"

using nlohmann::json;
using namespace pia;

namespace {

struct GlobalOpts {
    int threads = 0;
    std::string format = "text"; // text | json | csv | markdown
    std::string out;
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 60;
};

QuadratureConfig quad_config(const GlobalOpts& g) {
    QuadratureConfig cfg;
    cfg.abs_tol = g.abs_tol;
    cfg.rel_tol = g.rel_tol;
    cfg.max_depth = g.max_depth;
    return cfg;
}

void emit(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + g.out);
    f << text;
    std::cout << "wrote " << g.out << "\n";
}

std::string human(double x) { return format_sig(x, 6); }
std::string machine(double x) { return format_sig(x, 12); }

// Pre-scan argv for --config and load it as a json object of flag defaults.
json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot open config ") + argv[i + 1]);
            json j;
            in >> j;
            return j;
        }
    }
    return json::object();
}

template <class T>
void apply_default(const json& cfg, const char* key, T& slot) {
    if (cfg.contains(key)) slot = cfg[key].get<T>();
}

int cmd_ratio(const GlobalOpts& g, const std::string& curve_text, const std::string& mech_text,
              int n) {
    const auto curve = curve_from_text(curve_text);
    const MechanismSpec spec = mechanism_from_text(mech_text);
    const QuadratureConfig cfg = quad_config(g);
    const int eff_n = is_sample_based(spec) ? 1 : n;

    const double mech_rev = mechanism_revenue(spec, *curve, eff_n, cfg);
    const double opt_rev = optimal_revenue(*curve, eff_n, cfg);
    const double ratio = revenue_ratio(mech_rev, opt_rev);
    const auto bounds = applicable_bounds(spec, *curve, eff_n, cfg);
    bool all_sound = true;
    for (const auto& b : bounds) all_sound = all_sound && b.sound;

    if (g.format == "json") {
        json j;
        j["mechanism"] = mechanism_to_json(spec);
        j["curve"] = curve_to_json(*curve);
        j["n"] = eff_n;
        j["mechanism_revenue"] = mech_rev;
        j["optimal_revenue"] = opt_rev;
        j["ratio"] = ratio;
        j["bounds"] = json::array();
        for (const auto& b : bounds) j["bounds"].push_back(bound_report_to_json(b));
        j["all_sound"] = all_sound;
        emit(g, j.dump(2) + "\n");
    } else if (g.format == "markdown") {
        std::ostringstream os;
        os << "| quantity | value |\n|---|---|\n"
           << "| mechanism | " << describe(spec) << " |\n"
           << "| curve | " << curve->describe() << " |\n"
           << "| n | " << eff_n << " |\n"
           << "| mechanism revenue | " << human(mech_rev) << " |\n"
           << "| optimal revenue | " << human(opt_rev) << " |\n"
           << "| ratio | " << human(ratio) << " |\n";
        if (!bounds.empty())
            os << "\n| bound | value | exact | sound | note |\n|---|---|---|---|---|\n";
        for (const auto& b : bounds)
            os << "| " << b.bound << " | " << human(b.value) << " | "
               << (b.exact ? human(*b.exact) : std::string("-")) << " | "
               << (b.sound ? "yes" : "NO") << " | " << (b.note.empty() ? "-" : b.note) << " |\n";
        emit(g, os.str());
    } else {
        std::ostringstream os;
        os << "mechanism:         " << describe(spec) << "\n"
           << "curve:             " << curve->describe() << "\n"
           << "n:                 " << eff_n << "\n"
           << "mechanism revenue: " << human(mech_rev) << "\n"
           << "optimal revenue:   " << human(opt_rev) << "\n"
           << "ratio:             " << human(ratio) << "\n";
        if (!bounds.empty()) os << "bounds:\n";
        for (const auto& b : bounds) {
            os << "  " << b.bound << " = " << human(b.value);
            if (b.exact) os << "  (exact " << human(*b.exact) << ")";
            os << (b.sound ? "  sound" : "  UNSOUND");
            if (!b.note.empty()) os << "  [" << b.note << "]";
            os << "\n";
        }
        emit(g, os.str());
    }
    return all_sound ? 0 : 1;
}

int cmd_verify(const GlobalOpts& g, const std::string& selector, int n, double q_step,
               double beta_step, const RandomizedPtsParams& params,
               const std::string& curve_text) {
    const QuadratureConfig cfg = quad_config(g);
    std::ostringstream os;
    bool pass = true;

    if (selector == "thm31" || selector == "mixed-spa") {
        const auto cert = verify_mixed_spa_beats_bk(n, 10000, cfg, g.threads);
        pass = cert.passed;
        os << "mixed spa vs the " << human(bk_ratio(n)) << " baseline (n=" << n << ")\n"
           << "  anchor r0        = " << machine(cert.r0) << "\n"
           << "  prose q*=0 value = " << machine(cert.stated_q0_value)
           << "  (reported, not reproduced by the bound)\n"
           << "  q_bar            = " << machine(cert.q_bar) << "\n"
           << "  gamma            = " << machine(cert.gamma) << "\n"
           << "  epsilon          = " << machine(cert.epsilon) << "\n"
           << "  certified margin = " << machine(cert.margin) << " at q* = "
           << machine(cert.argmin_q) << "\n"
           << (pass ? "PASS" : "FAIL") << "\n";
    } else if (selector == "thm42" || selector == "randomized-pts") {
        const auto cert = verify_randomized_pts_beats_half(params, q_step, beta_step, g.threads);
        pass = cert.passed;
        os << "randomized post-the-sample vs 1/2 (zeta=" << machine(params.zeta)
           << ", rho=" << machine(params.rho) << ", epsilon=" << machine(params.epsilon)
           << ", delta=" << machine(params.delta) << ")\n"
           << "  case A min (>= 0.505):     " << machine(cert.case_a_min.value) << " at q*="
           << machine(cert.case_a_min.q_star) << ", beta=" << machine(cert.case_a_min.beta) << "\n"
           << "  case B min (>= 0.518):     " << machine(cert.case_b_min.value) << " at q*="
           << machine(cert.case_b_min.q_star) << ", beta=" << machine(cert.case_b_min.beta) << "\n"
           << "  case C min (>= 0.500005):  " << machine(cert.case_c_min.value) << "\n"
           << "  certified margin (>= 5e-9): " << machine(cert.margin) << "\n";
        if (!cert.failure.empty()) os << "  " << cert.failure << "\n";
        os << (pass ? "PASS" : "FAIL") << "\n";
    } else if (selector == "lemmas" || selector == "bounds") {
        const auto curve = curve_from_text(curve_text.empty() ? "uniform" : curve_text);
        const auto reports = soundness_suite(*curve, cfg);
        for (const auto& r : reports) {
            pass = pass && r.sound;
            os << (r.sound ? "  ok   " : "  FAIL ") << r.bound;
            if (r.exact) os << "  bound " << human(r.value) << " vs exact " << human(*r.exact);
            if (!r.note.empty()) os << "  [" << r.note << "]";
            os << "\n";
        }
        os << curve->describe() << ": " << (pass ? "PASS" : "FAIL") << "\n";
        if (g.format == "json") {
            emit(g, bound_reports_to_jsonl(reports));
            std::cerr << (pass ? "PASS" : "FAIL") << "\n";
            return pass ? 0 : 1;
        }
    } else if (selector == "bk") {
        const auto curve = curve_from_text(curve_text.empty() ? "uniform" : curve_text);
        for (int k = 1; k <= std::max(1, n); ++k) {
            const bool ok = bk_extra_bidder_check(*curve, k, cfg);
            pass = pass && ok;
            os << (ok ? "  ok   " : "  FAIL ") << "spa(n=" << k + 1 << ") >= opt(n=" << k
               << ")\n";
        }
        os << curve->describe() << ": " << (pass ? "PASS" : "FAIL") << "\n";
    } else {
        throw CLI::ValidationError("verify",
                                   "unknown selector (use thm31|thm42|lemmas|bk or their aliases "
                                   "mixed-spa|randomized-pts|bounds)");
    }
    emit(g, os.str());
    return pass ? 0 : 1;
}

int cmd_scan(const GlobalOpts& g, const std::string& mech_text, int n, double step, double qmin,
             double qmax, const std::string& json_out) {
    const MechanismSpec spec = mechanism_from_text(mech_text);
    ScanConfig scan;
    scan.q_step = step;
    scan.q_min = qmin > 0.0 ? qmin : step;
    scan.q_max = qmax;
    scan.threads = g.threads;
    const ScanResult result = scan_triangles(spec, n, scan, quad_config(g));
    if (!json_out.empty()) {
        std::ofstream f(json_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + json_out);
        f << scan_to_json(result).dump(2) << "\n";
    }
    if (g.format == "json") {
        emit(g, scan_to_json(result).dump(2) + "\n");
    } else if (g.format == "markdown") {
        std::ostringstream os;
        os << "| q_star | ratio |\n|---|---|\n";
        for (const auto& p : result.points)
            os << "| " << format_sig(p.q_star, 6) << " | " << format_sig(p.ratio, 6) << " |\n";
        emit(g, os.str());
    } else {
        emit(g, scan_to_csv(result));
    }
    std::cerr << "min ratio " << machine(result.min_ratio) << " at q* = "
              << machine(result.argmin_q_star) << "\n";
    return 0;
}

int cmd_optimize(const GlobalOpts& g, int n, double eps_lo, double eps_hi, double eps_step,
                 double delta_lo, double delta_hi, double delta_step, double q_step) {
    std::vector<double> eps_grid, delta_grid;
    for (double e = eps_lo; e <= eps_hi + 1e-12; e += eps_step) eps_grid.push_back(e);
    for (double d = delta_lo; d <= delta_hi + 1e-12; d += delta_step) delta_grid.push_back(d);
    ScanConfig scan;
    scan.q_step = q_step;
    scan.q_min = q_step;
    scan.q_max = 0.999;
    scan.threads = g.threads;
    const auto best = optimize_params(n, eps_grid, delta_grid, scan, quad_config(g));

    json j;
    j["n"] = n;
    j["best"] = {{"epsilon", best.epsilon}, {"delta", best.delta}, {"worst_ratio", best.worst_ratio}};
    j["grid"] = json::array();
    for (const auto& [e, d, r] : best.grid)
        j["grid"].push_back({{"epsilon", e}, {"delta", d}, {"worst_ratio", r}});
    if (g.format == "json") {
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "best epsilon: " << human(best.epsilon) << "\n"
           << "best delta:   " << human(best.delta) << "\n"
           << "worst ratio:  " << human(best.worst_ratio) << "\n";
        emit(g, os.str());
        if (!g.out.empty()) std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& mech_text, const std::string& curve_text,
                 int n, std::uint64_t trials, std::uint64_t seed) {
    const MechanismSpec spec = mechanism_from_text(mech_text);
    const auto curve = curve_from_text(curve_text);
    const int eff_n = is_sample_based(spec) ? 1 : n;
    const auto est = estimate_revenue(spec, *curve, eff_n, trials, seed, g.threads);
    const double analytic = mechanism_revenue(spec, *curve, eff_n, quad_config(g));

    if (g.format == "json") {
        json j;
        j["mechanism"] = mechanism_to_json(spec);
        j["curve"] = curve_to_json(*curve);
        j["n"] = eff_n;
        j["trials"] = trials;
        j["seed"] = seed;
        j["mc_mean"] = est.mean;
        j["mc_std_error"] = est.std_error;
        j["analytic"] = analytic;
        emit(g, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "monte carlo: " << human(est.mean) << " +/- " << human(est.std_error) << "  ("
           << trials << " trials, seed " << seed << ")\n"
           << "analytic:    " << human(analytic) << "\n"
           << "difference:  " << human(est.mean - analytic) << "  ("
           << human(est.std_error > 0 ? (est.mean - analytic) / est.std_error : 0.0)
           << " sigma)\n";
        emit(g, os.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prior-independent auction analytics"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    std::string config_path;
    json cfg = json::object();
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    apply_default(cfg, "threads", g.threads);
    apply_default(cfg, "format", g.format);
    apply_default(cfg, "out", g.out);
    apply_default(cfg, "abs-tol", g.abs_tol);
    apply_default(cfg, "rel-tol", g.rel_tol);
    apply_default(cfg, "max-depth", g.max_depth);

    app.add_option("--config", config_path, "JSON file of flag defaults (flags take precedence)");
    app.add_option("--threads", g.threads, "worker threads (0 = all, 1 = serial)");
    app.add_option("--format", g.format, "text | json | csv | markdown")
        ->check(CLI::IsMember({"text", "json", "csv", "markdown"}));
    app.add_option("--out", g.out, "write the primary output to this path");
    app.add_option("--abs-tol", g.abs_tol, "quadrature absolute tolerance");
    app.add_option("--rel-tol", g.rel_tol, "quadrature relative tolerance");
    app.add_option("--max-depth", g.max_depth, "quadrature refinement depth limit");

    // ratio
    std::string curve_text = cfg.value("curve", std::string{});
    std::string mech_text = cfg.value("mech", std::string{});
    int n = cfg.value("n", 2);
    auto* ratio = app.add_subcommand("ratio", "exact revenue, optimal revenue, ratio, bounds");
    ratio->add_option("--curve", curve_text, "curve (shorthand, JSON, or file)")->required(!cfg.contains("curve"));
    ratio->add_option("--mech", mech_text, "mechanism (shorthand, JSON, or file)")->required(!cfg.contains("mech"));
    ratio->add_option("--n", n, "number of bidders");

    // verify
    std::string selector;
    double q_step = cfg.value("q-step", 1e-4);
    double beta_step = cfg.value("beta-step", 1e-3);
    RandomizedPtsParams params;
    apply_default(cfg, "zeta", params.zeta);
    apply_default(cfg, "rho", params.rho);
    apply_default(cfg, "epsilon", params.epsilon);
    apply_default(cfg, "delta", params.delta);
    auto* verify = app.add_subcommand("verify", "run a certificate or the bound suite");
    verify->add_option("selector", selector, "thm31 | thm42 | lemmas | bk (aliases: mixed-spa, randomized-pts, bounds)")
        ->required();
    verify->add_option("--n", n, "number of bidders");
    verify->add_option("--q-step", q_step, "q* grid step");
    verify->add_option("--beta-step", beta_step, "beta grid step");
    verify->add_option("--zeta", params.zeta, "shaded branch probability");
    verify->add_option("--rho", params.rho, "shading factor");
    verify->add_option("--epsilon", params.epsilon, "inflated branch probability");
    verify->add_option("--delta", params.delta, "inflation factor");
    verify->add_option("--curve", curve_text, "curve for lemmas/bk");

    // scan
    double step = cfg.value("step", 1e-3);
    double qmin = cfg.value("qmin", 0.0);
    double qmax = cfg.value("qmax", 0.999);
    std::string json_out = cfg.value("json-out", std::string{});
    auto* scan = app.add_subcommand("scan", "triangle worst-case scan to CSV/JSON");
    scan->add_option("--mech", mech_text, "mechanism")->required(!cfg.contains("mech"));
    scan->add_option("--n", n, "number of bidders");
    scan->add_option("--step", step, "q* grid step");
    scan->add_option("--qmin", qmin, "grid start (default: one step)");
    scan->add_option("--qmax", qmax, "grid end");
    scan->add_option("--json-out", json_out, "also write the JSON record here");

    // optimize
    double eps_lo = cfg.value("eps-min", 0.0), eps_hi = cfg.value("eps-max", 1.0),
           eps_step = cfg.value("eps-step", 0.01);
    double delta_lo = cfg.value("delta-min", 0.25), delta_hi = cfg.value("delta-max", 4.0),
           delta_step = cfg.value("delta-step", 0.25);
    double opt_q_step = cfg.value("opt-q-step", 2e-3);
    auto* optimize = app.add_subcommand("optimize", "grid-search (epsilon, delta) against triangles");
    optimize->add_option("--n", n, "number of bidders");
    optimize->add_option("--eps-min", eps_lo);
    optimize->add_option("--eps-max", eps_hi);
    optimize->add_option("--eps-step", eps_step);
    optimize->add_option("--delta-min", delta_lo);
    optimize->add_option("--delta-max", delta_hi);
    optimize->add_option("--delta-step", delta_step);
    optimize->add_option("--q-step", opt_q_step, "triangle grid step");

    // simulate
    std::uint64_t trials = cfg.value("trials", 1000000ULL);
    std::uint64_t seed = cfg.value("seed", 1ULL);
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate next to the analytic value");
    simulate->add_option("--mech", mech_text, "mechanism")->required(!cfg.contains("mech"));
    simulate->add_option("--curve", curve_text, "curve")->required(!cfg.contains("curve"));
    simulate->add_option("--n", n, "number of bidders");
    simulate->add_option("--trials", trials, "trial count");
    simulate->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*ratio) return cmd_ratio(g, curve_text, mech_text, n);
        if (*verify) return cmd_verify(g, selector, n, q_step, beta_step, params, curve_text);
        if (*scan) return cmd_scan(g, mech_text, n, step, qmin, qmax, json_out);
        if (*optimize)
            return cmd_optimize(g, n, eps_lo, eps_hi, eps_step, delta_lo, delta_hi, delta_step,
                                opt_q_step);
        if (*simulate) return cmd_simulate(g, mech_text, curve_text, n, trials, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
