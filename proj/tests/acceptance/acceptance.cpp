// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "boostctl/config.hpp"
#include "boostctl/controller.hpp"
#include "boostctl/estimator.hpp"
#include "boostctl/scenarios.hpp"
#include "boostctl/simulation.hpp"
#include "boostctl/synthesis.hpp"

using namespace boostctl;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s  %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Sylvester's criterion on a symmetric 2x2 matrix; independent of the
// eigenvalue code the solver uses.
bool negative_definite(const Mat2& m) { return m.a < 0.0 && det(m) > 0.0; }

const DesignConfig kConfig;

struct Run {
    Design design;
    SimTrace trace;
};

Run simulate(const Scenario& scenario, SimConfig cfg) {
    Run r{run_design(kConfig), {}};
    r.trace = run_closed_loop(r.design.model, r.design.cert, r.design.gains, scenario, cfg);
    return r;
}

// Time from t_step until |vo - vo_ref| stays within band up to t_stop.
double settle_time(const SimTrace& tr, double t_step, double t_stop, double vo_ref, double band) {
    double last_out = -1.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.t[i] >= t_step && tr.t[i] < t_stop && std::abs(tr.vo[i] - vo_ref) > band) {
            last_out = tr.t[i];
        }
    }
    if (last_out < 0.0) {
        return 0.0;
    }
    const double row_dt = tr.t[1] - tr.t[0];
    return last_out + row_dt - t_step;
}

std::int64_t switches_in(const SimTrace& tr, double t0, double t1) {
    std::int64_t n = 0;
    for (const TraceEvent& e : tr.events) {
        if (e.kind == EventKind::Switch && e.t >= t0 && e.t < t1) {
            ++n;
        }
    }
    return n;
}

void criterion_1() {
    const SwitchedModel model = build_model(kConfig.circuit);
    const auto start = std::chrono::steady_clock::now();
    const LyapunovCertificate cert = solve_common_lyapunov(model, kConfig.alpha);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double tol = kLmiTolerance * frobenius(cert.P);
    bool ok = seconds < 1.0 && cert.P.b == cert.P.c && cert.P.a > 0.0 && det(cert.P) > 0.0;
    double worst = -1e300;
    for (double d : {duty_range(kConfig.circuit).min, duty_range(kConfig.circuit).max}) {
        const Mat2 a = averaged_matrix(model, d);
        const Mat2 m = transpose(a) * cert.P + cert.P * a + (2.0 * kConfig.alpha) * cert.P;
        // slack <= -tol  <=>  m + tol I is negative definite
        ok = ok && negative_definite(m + tol * Mat2::identity());
        worst = std::max(worst, lmi_slack(cert.P, a, kConfig.alpha));
    }
    report(1, "design feasibility (alpha=40)", ok,
           fmt("lambda_min(P)=%.4g slacks=(%.4g, %.4g) worst<=-tol=%.3g solve=%.3fs", cert.pmin_eig,
               cert.slack_min_vertex, cert.slack_max_vertex, -tol, seconds));
}

void criterion_2() {
    const DecayRateBounds b = decay_rate_bounds(build_model(kConfig.circuit));
    const bool ok = b.per_vertex >= 950.0 && b.per_vertex <= 1050.0;
    report(2, "decay-rate bound in [950,1050]", ok,
           fmt("alpha_bar=%.2f 1/s (one P for both vertices: %.2f 1/s)", b.per_vertex, b.common));
}

void criterion_3() {
    const Scenario s1 = scenario_s1();
    const Run r = simulate(s1, configure_for(s1, sim_config(kConfig)));
    const SteadyStateMetrics m = steady_state_metrics(r.trace, 0.16, 0.20);
    const std::int64_t late_switches = switches_in(r.trace, 0.19, 0.20);
    const double settle = settle_time(r.trace, 0.3, s1.duration, 450.0, 0.01 * 450.0);
    const bool ok = std::abs(m.mean_vo - 300.0) <= 0.02 * 300.0 && late_switches == 0 && settle <= 0.03;
    report(3, "S1 reproduction", ok,
           fmt("mean vo[0.16,0.2]=%.3f V, switches[0.19,0.2]=%lld, settle after 0.3 s=%.2f ms", m.mean_vo,
               static_cast<long long>(late_switches), settle * 1e3));
}

SimTrace criterion_4() {
    const Scenario s2 = scenario_s2();
    const Run r = simulate(s2, configure_for(s2, sim_config(kConfig)));
    bool ok = true;
    std::string detail = "settle ms:";
    double worst_p1 = 0.0;
    double worst_p2 = 0.0;
    std::vector<double> edges = s2.breakpoints;
    edges.push_back(s2.duration);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double settle = settle_time(r.trace, edges[i], edges[i + 1], 450.0, 0.01 * 450.0);
        ok = ok && settle <= 0.03;
        detail += fmt(" %.2f", settle * 1e3);
        const SteadyStateMetrics m = steady_state_metrics(r.trace, edges[i] + 0.03, edges[i + 1]);
        worst_p1 = std::max(worst_p1, m.max_abs_p1_error);
        worst_p2 = std::max(worst_p2, m.max_abs_p2_error);
    }
    const SteadyStateMetrics first = steady_state_metrics(r.trace, 0.03, edges.front());
    worst_p1 = std::max(worst_p1, first.max_abs_p1_error);
    worst_p2 = std::max(worst_p2, first.max_abs_p2_error);
    ok = ok && worst_p1 <= 1.0 && worst_p2 <= 0.5;
    report(4, "S2 reproduction", ok, detail + fmt(", max |p1_hat-vin|=%.4f V, max |p2_hat-iLoad|=%.4f A", worst_p1,
                                                  worst_p2));
    return r.trace;
}

void criterion_5(const SimTrace& s2) {
    const double f_early = measure_switching_frequency(s2, 0.05, 0.10);
    const double f_late = measure_switching_frequency(s2, 0.35, 0.40);
    const bool ok = f_early >= 160e3 && f_early <= 240e3 && f_late >= 160e3 && f_late <= 240e3;
    report(5, "switching frequency in [160,240] kHz", ok,
           fmt("fs[0.05,0.1)=%.1f kHz, fs[0.35,0.4)=%.1f kHz", f_early / 1e3, f_late / 1e3));
}

// Estimation-error norm per step for a noise-free closed loop with constant p.
std::vector<double> error_norms(EstimatorVariant variant, double duration) {
    const ParamVec p{350.0, 10.0};
    Scenario sc;
    sc.name = "const";
    sc.p_schedule = [p](double) { return p; };
    sc.duration = duration;
    sc.estimator_enabled = true;
    SimConfig cfg = sim_config(kConfig);
    cfg.t_end = duration;
    cfg.noise.enabled = false;
    cfg.variant = variant;
    cfg.target = TargetSource::Exact;
    cfg.log_decimation = 1;
    cfg.p_guess = {p.x0 - 50.0, p.x1 - 10.0};
    cfg.x0 = compute_equilibrium(build_model(kConfig.circuit), p, kConfig.circuit.vo_ref).x_star;
    const Run r = simulate(sc, cfg);
    std::vector<double> e;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        e.push_back(std::hypot(r.trace.p1_hat[i] - p.x0, r.trace.p2_hat[i] - p.x1));
    }
    return e;
}

// First time after which the error stays below 1% of its initial value.
double one_percent_time(const std::vector<double>& e, double dt) {
    const double limit = 0.01 * e.front();
    std::size_t last_above = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] >= limit) {
            last_above = i;
        }
    }
    return static_cast<double>(last_above + 1) * dt;
}

void criterion_6() {
    const double lambda = kConfig.lambda;
    const double dt = kConfig.Ts();
    const double t_basic = one_percent_time(error_norms(EstimatorVariant::Basic, 15.0 / lambda), dt);
    const double t_filt = one_percent_time(error_norms(EstimatorVariant::Filtered, 15.0 / lambda), dt);
    const bool ok = std::abs(t_basic - 5.0 / lambda) <= 1e-4 && t_filt <= 10.0 / lambda;
    report(6, "estimator convergence rate", ok,
           fmt("basic 1%% at %.4f ms (target %.2f +- 0.1), filtered 1%% at %.4f ms (limit %.2f)", t_basic * 1e3,
               5e3 / lambda, t_filt * 1e3, 10e3 / lambda));
}

// Basic estimator against an Euler plant under a given switching sequence.
std::vector<Vec2> basic_errors(const std::function<int(std::int64_t)>& mode, std::int64_t steps) {
    const Design d = run_design(kConfig);
    const ParamVec p{350.0, 10.0};
    const double dt = kConfig.Ts();
    StateVec x{5.0, 380.0};
    EstimatorState est = estimator_init(d.gains, x, {300.0, 0.0}, EstimatorVariant::Basic);
    std::vector<Vec2> e;
    for (std::int64_t k = 0; k < steps; ++k) {
        const int m = mode(k);
        e.push_back(p - estimator_step(est, x, m, d.model, dt));
        x = x + dt * mode_dynamics(d.model, m, x, p);
    }
    return e;
}

void criterion_7() {
    const std::int64_t steps = 40000;
    const auto e0 = basic_errors([](std::int64_t) { return 0; }, steps);
    const auto e1 = basic_errors([](std::int64_t) { return 1; }, steps);
    const auto ea = basic_errors([](std::int64_t k) { return int(k / 13 % 2); }, steps);
    double worst = 0.0;
    for (std::size_t k = 0; k < e0.size(); ++k) {
        worst = std::max({worst, norm(e0[k] - e1[k]), norm(e0[k] - ea[k])});
    }
    const double rel = worst / norm(e0.front());
    report(7, "mode-independent error dynamics", rel <= 1e-9,
           fmt("max deviation between mode sequences = %.3g relative", rel));
}

double tone_ripple(double f) {
    const Design d = run_design(kConfig);
    const double dt = kConfig.Ts();
    EstimatorState est = estimator_init(d.gains, {}, {}, EstimatorVariant::Filtered);
    const auto steps = static_cast<std::int64_t>(std::llround(2e-3 / dt));
    double lo = 1e300;
    double hi = -1e300;
    for (std::int64_t k = 0; k < steps; ++k) {
        const double nu = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(k) * dt);
        const ParamVec p_hat = estimator_step(est, {nu, nu}, 0, d.model, dt);
        if (k >= steps - steps / 10) {
            lo = std::min(lo, p_hat.x0);
            hi = std::max(hi, p_hat.x0);
        }
    }
    return 0.5 * (hi - lo);
}

void criterion_8() {
    const double a1 = tone_ripple(1e6);
    const double a2 = tone_ripple(2e6);
    const double ratio = a1 / a2;
    report(8, "noise relative degree (r=1)", std::abs(ratio - 2.0) <= 0.4,
           fmt("ripple 1 MHz=%.4g, 2 MHz=%.4g, ratio=%.3f", a1, a2, ratio));
}

void criterion_9() {
    const Scenario s3 = scenario_by_name("s3");
    const Run r = simulate(s3, configure_for(s3, sim_config(kConfig)));
    const SimTrace& tr = r.trace;

    // max |dp/dt| of the schedule, by differencing on a fine grid
    double max_dp1 = 0.0;
    double max_dp2 = 0.0;
    const double h = 1e-5;
    for (double t = 0.0; t + h <= s3.duration; t += h) {
        const ParamVec a = s3.p(t);
        const ParamVec b = s3.p(t + h);
        max_dp1 = std::max(max_dp1, std::abs(b.x0 - a.x0) / h);
        max_dp2 = std::max(max_dp2, std::abs(b.x1 - a.x1) / h);
    }
    const double bound1 = max_dp1 / kConfig.lambda * 1.2;
    const double bound2 = max_dp2 / kConfig.lambda * 1.2;

    const auto excluded = [&](double t) {
        if (t < 0.005) {
            return true;
        }
        for (double b : s3.breakpoints) {
            if (t >= b && t < b + 0.005) {
                return true;
            }
        }
        return false;
    };
    double worst_vo = 0.0;
    double worst_e1 = 0.0;
    double worst_e2 = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (excluded(tr.t[i])) {
            continue;
        }
        worst_vo = std::max(worst_vo, std::abs(tr.vo[i] - 450.0));
        worst_e1 = std::max(worst_e1, std::abs(tr.p1_hat[i] - tr.p1_true[i]));
        worst_e2 = std::max(worst_e2, std::abs(tr.p2_hat[i] - tr.p2_true[i]));
    }
    const bool ok = worst_vo <= 0.02 * 450.0 && worst_e1 <= bound1 && worst_e2 <= bound2;
    report(9, "S3 tracking", ok,
           fmt("max |vo-450|=%.3f V, |e_p1|=%.4f (<=%.4f) V, |e_p2|=%.4f (<=%.4f) A", worst_vo, worst_e1, bound1,
               worst_e2, bound2));
}

struct DecreaseResult {
    bool ok = true;
    double v_ripple = 0.0;
    double v_max_after = 0.0;
    double v_max_final = 0.0;  // last 5 ms
    double crossing = -1.0;
    std::int64_t increases = 0;
};

// Noise-free run with the exact parameters, h scaled down 1000x. With the
// wrong mode held at most while |s| < h_eff, V' <= -2 alpha V + 2 h_eff, so
// V can only grow inside V_ripple = h_eff/alpha (+ the Euler second-order term).
DecreaseResult lyapunov_decrease(const ParamVec& p, double duration) {
    const double h_scale = 1e-3;
    const Design d = run_design(kConfig);
    const double dt = kConfig.Ts();

    Scenario sc;
    sc.name = "const";
    sc.p_schedule = [p](double) { return p; };
    sc.duration = duration;
    SimConfig cfg = sim_config(kConfig);
    cfg.t_end = duration;
    cfg.estimator_enabled = false;
    cfg.noise.enabled = false;
    cfg.target = TargetSource::Exact;
    cfg.h_scale = h_scale;
    cfg.log_decimation = 1;
    cfg.x0 = StateVec{0.0, p.x0};
    const SimTrace tr = run_closed_loop(d.model, d.cert, d.gains, sc, cfg);

    const Equilibrium eq = compute_equilibrium(d.model, p, kConfig.circuit.vo_ref);
    const SurfaceRates u = surface_rates(d.model, d.cert.P, eq, p);
    const double h = h_scale * hysteresis_width(d.model, d.cert.P, eq, p, kConfig.fs_target);
    const double h_eff = h + dt * std::max(std::abs(u.u0), std::abs(u.u1));
    double fpf = 0.0;
    for (int m : {0, 1}) {
        const Vec2 b = mode_dynamics(d.model, m, eq.x_star, p);
        fpf = std::max(fpf, quad(b, d.cert.P, b));
    }

    DecreaseResult res;
    res.v_ripple = h_eff / kConfig.alpha + dt * fpf / (2.0 * kConfig.alpha);
    const double ball = 4.0 * res.v_ripple;  // ||x - x*||_P <= 2 sqrt(V_ripple)
    const auto V = [&](std::size_t i) {
        const Vec2 e{tr.iL[i] - tr.iL_star[i], tr.vo[i] - tr.vo_star[i]};
        return quad(e, d.cert.P, e);
    };
    bool inside = false;
    double prev = V(0);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const double v = V(i);
        if (!inside && v <= ball) {
            inside = true;
            res.crossing = tr.t[i];
        }
        if (inside) {
            res.v_max_after = std::max(res.v_max_after, v);
            if (tr.t[i] >= duration - 0.005) {
                res.v_max_final = std::max(res.v_max_final, v);
            }
            // non-increasing except where the ripple band allows growth
            if (v > prev && v > res.v_ripple) {
                ++res.increases;
            }
            if (v > ball) {
                res.ok = false;
            }
        }
        prev = v;
    }
    res.ok = res.ok && inside && res.increases == 0;
    return res;
}

void criterion_10() {
    const DecreaseResult a = lyapunov_decrease({350.0, 0.0}, 0.02);
    const DecreaseResult b = lyapunov_decrease({300.0, 20.0}, 0.02);
    report(10, "Lyapunov decrease (h x 1e-3)", a.ok && b.ok,
           fmt("V_ripple=%.3g/%.3g, enters 2*sqrt(V_ripple) at %.3f/%.3f ms, max V after=%.3g/%.3g, "
               "final 5 ms=%.3g/%.3g, increases above band=%lld/%lld",
               a.v_ripple, b.v_ripple, a.crossing * 1e3, b.crossing * 1e3, a.v_max_after, b.v_max_after,
               a.v_max_final, b.v_max_final,
               static_cast<long long>(a.increases), static_cast<long long>(b.increases)));
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    const SimTrace s2 = criterion_4();
    criterion_5(s2);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}
