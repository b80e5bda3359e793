// boostctl: design, simulate and report for the boost-converter controller.
//
// Exit codes: 0 ok, 1 usage / IO / config error, 2 infeasible design,
// 3 simulation diverged.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boostctl/config.hpp"
#include "boostctl/scenarios.hpp"
#include "boostctl/simulation.hpp"
#include "boostctl/synthesis.hpp"
#include "boostctl/trace_io.hpp"

namespace fs = std::filesystem;
using namespace boostctl;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitDiverged = 3;

struct CommonOptions {
    std::string config;
    std::vector<std::string> overrides;
};

DesignConfig resolve_config(const CommonOptions& opt) {
    DesignConfig cfg = opt.config.empty() ? DesignConfig{} : load_config(opt.config);
    for (const std::string& kv : opt.overrides) {
        apply_override(cfg, kv);
    }
    cfg.validate();
    return cfg;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string mat(const Mat2& m) {
    return "[[" + num(m.a) + ", " + num(m.b) + "], [" + num(m.c) + ", " + num(m.d) + "]]";
}

int cmd_design(const CommonOptions& opt) {
    const DesignConfig cfg = resolve_config(opt);
    const SwitchedModel model = build_model(cfg.circuit);
    const DecayRateBounds bounds = decay_rate_bounds(model);

    Design d;
    try {
        d = run_design(cfg);
    } catch (const Infeasible& e) {
        std::cout << "feasible = false\n"
                  << "alpha = " << num(cfg.alpha) << '\n'
                  << "best_merit = " << num(e.best_merit()) << '\n'
                  << "alpha_bar = " << num(bounds.per_vertex) << '\n'
                  << "alpha_bar_common = " << num(bounds.common) << '\n';
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    }

    const DutyRange duty = duty_range(cfg.circuit);
    const ParamVec p_nom{0.5 * (cfg.circuit.vin_min + cfg.circuit.vin_max), 0.0};
    const Equilibrium eq = compute_equilibrium(d.model, p_nom, cfg.circuit.vo_ref);
    const double h = hysteresis_width(d.model, d.cert.P, eq, p_nom, cfg.fs_target);
    const SurfaceRates u = surface_rates(d.model, d.cert.P, eq, p_nom);

    std::cout << "feasible = true\n"
              << "alpha = " << num(cfg.alpha) << '\n'
              << "duty_vertices = " << num(duty.min) << ", " << num(duty.max) << '\n'
              << "P = " << mat(d.cert.P) << '\n'
              << "slack_min_vertex = " << num(d.cert.slack_min_vertex) << '\n'
              << "slack_max_vertex = " << num(d.cert.slack_max_vertex) << '\n'
              << "pmin_eig = " << num(d.cert.pmin_eig) << '\n'
              << "alpha_bar = " << num(bounds.per_vertex) << '\n'
              << "alpha_bar_common = " << num(bounds.common) << '\n'
              << "kappa = " << mat(d.gains.kappa) << '\n'
              << "theta = " << mat(d.gains.theta) << '\n'
              << "lambda_theta = " << num(d.gains.lambda_theta()) << '\n'
              << "nominal_p = " << num(p_nom.x0) << ", " << num(p_nom.x1) << '\n'
              << "sigma_star = " << num(eq.sigma_star) << '\n'
              << "x_star = " << num(eq.x_star.x0) << ", " << num(eq.x_star.x1) << '\n'
              << "surface_rates = " << num(u.u0) << ", " << num(u.u1) << '\n'
              << "h = " << num(h) << '\n'
              << "predicted_fs = " << num(predicted_switching_frequency(d.model, d.cert.P, eq, p_nom, h)) << '\n'
              << "Ts = " << num(cfg.Ts()) << '\n';
    return 0;
}

struct SimulateOptions {
    std::string scenario;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::string irradiance;
};

int cmd_simulate(const CommonOptions& opt, const SimulateOptions& so) {
    DesignConfig cfg = resolve_config(opt);
    if (so.seed) {
        cfg.seed = *so.seed;
    }
    Scenario scenario;
    if (!so.irradiance.empty()) {
        if (so.scenario != "s3") {
            throw CLI::ValidationError("--irradiance", "only applies to scenario s3");
        }
        scenario = scenario_s3(load_irradiance_csv(so.irradiance));
    } else {
        scenario = scenario_by_name(so.scenario);
    }

    const Design d = run_design(cfg);
    const SimConfig sim = configure_for(scenario, sim_config(cfg));
    const SimTrace trace = run_closed_loop(d.model, d.cert, d.gains, scenario, sim);

    fs::create_directories(so.out);
    const fs::path base = fs::path(so.out) / scenario.name;
    const fs::path trace_path = base.string() + "_trace.csv";
    write_trace_csv(trace_path, trace);
    write_events_csv(events_path_for(trace_path), trace.events);

    const fs::path metrics_path = base.string() + "_metrics.txt";
    std::ofstream metrics(metrics_path);
    if (!metrics) {
        throw std::runtime_error("cannot write " + metrics_path.string());
    }
    metrics << "scenario = " << scenario.name << '\n' << "seed = " << cfg.seed << '\n';
    for (const MetricsWindow& w : default_metric_windows(scenario)) {
        write_window_report(metrics, evaluate_window(trace, w, d.cert.P));
    }
    if (!metrics) {
        throw std::runtime_error("write failed for " + metrics_path.string());
    }

    std::cout << "wrote " << trace_path.string() << " (" << trace.size() << " rows, " << trace.events.size()
              << " events)\n"
              << "wrote " << metrics_path.string() << '\n';
    return 0;
}

int cmd_report(const CommonOptions& opt, const std::string& trace_path, const std::string& window) {
    const DesignConfig cfg = resolve_config(opt);
    const Design d = run_design(cfg);
    const SimTrace trace = load_run(trace_path);
    const WindowReport r = evaluate_window(trace, parse_window(window), d.cert.P);
    write_window_report(std::cout, r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust switching control toolkit for a DC-DC boost converter"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", common.overrides, "override a configuration key (key=value)");
    };

    CLI::App* design = app.add_subcommand("design", "solve the Lyapunov LMIs and print the design");
    add_common(design);

    SimulateOptions so;
    CLI::App* simulate = app.add_subcommand("simulate", "run a closed-loop scenario and write trace + metrics");
    add_common(simulate);
    simulate->add_option("--scenario", so.scenario, "s1, s2 or s3")
        ->required()
        ->check(CLI::IsMember({"s1", "s2", "s3"}));
    simulate->add_option("--out", so.out, "output directory");
    simulate->add_option("--seed", so.seed, "noise seed (overrides the config)");
    simulate->add_option("--irradiance", so.irradiance, "irradiance CSV for s3")->check(CLI::ExistingFile);

    std::string trace_path;
    std::string window;
    CLI::App* report = app.add_subcommand("report", "metrics of a saved trace over a time window");
    add_common(report);
    report->add_option("trace", trace_path, "trace CSV written by simulate")->required()->check(CLI::ExistingFile);
    report->add_option("--window", window, "t0:t1 in seconds")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (design->parsed()) {
            return cmd_design(common);
        }
        if (simulate->parsed()) {
            return cmd_simulate(common, so);
        }
        return cmd_report(common, trace_path, window);
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const NonFiniteState& e) {
        std::cerr << "diverged: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
