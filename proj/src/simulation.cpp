#include "boostctl/simulation.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace boostctl {

void SimConfig::validate() const {
    if (!(Ts > 0.0)) {
        throw InvalidParameter("Ts must be positive");
    }
    if (!(t_end > Ts)) {
        throw InvalidParameter("t_end must exceed Ts");
    }
    if (!(f_target > 0.0)) {
        throw InvalidParameter("f_target must be positive");
    }
    if (log_decimation < 1) {
        throw InvalidParameter("log_decimation must be >= 1");
    }
    if (!(h_scale >= 0.0)) {
        throw InvalidParameter("h_scale must be >= 0");
    }
    if (target == TargetSource::Estimated && !estimator_enabled) {
        throw InvalidParameter("estimated target requires the estimator");
    }
    noise.validate();
}

SimConfig configure_for(const Scenario& scenario, SimConfig base) {
    base.t_end = scenario.duration;
    base.estimator_enabled = scenario.estimator_enabled;
    base.target = scenario.estimator_enabled ? TargetSource::Estimated : TargetSource::Nominal;
    return base;
}

void SimTrace::reserve(std::size_t n) {
    for (auto* col : {&t, &iL, &vo, &sigma, &p1_true, &p2_true, &p1_hat, &p2_hat, &iL_star, &vo_star, &s_value,
                      &h_value}) {
        col->reserve(n);
    }
}

StateVec integrate_step(const SwitchedModel& model, int mode, const StateVec& x, const ParamVec& p, double dt) {
    const StateVec next = x + dt * mode_dynamics(model, mode, x, p);
    if (!is_finite(next)) {
        throw NonFiniteState("plant state became non-finite", 0.0);
    }
    return next;
}

void check_euler_margin(const SwitchedModel& model, double Ts) {
    const double rho = std::max(spectral_radius(model.A0), spectral_radius(model.A1));
    if (!(rho * Ts < 1e-3)) {
        std::ostringstream msg;
        msg << "Euler step too coarse: max|eig(A)| * Ts = " << rho * Ts << " (need < 1e-3)";
        throw InvalidParameter(msg.str());
    }
}

SimTrace run_closed_loop(const SwitchedModel& model, const LyapunovCertificate& cert, const EstimatorGains& gains,
                         const Scenario& scenario, const SimConfig& cfg) {
    cfg.validate();
    check_euler_margin(model, cfg.Ts);

    const double dt = cfg.Ts;
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.t_end / dt));

    StateVec x = cfg.x0.value_or(StateVec{0.0, scenario.p(0.0).x0});
    const ParamVec p_initial_target = cfg.target == TargetSource::Exact ? scenario.p(0.0)
                                      : cfg.target == TargetSource::Estimated ? cfg.p_guess
                                                                                : cfg.p_nominal;
    ControllerState ctrl = make_controller(cert.P, p_initial_target, model, cfg.f_target, 0, cfg.h_scale);
    ctrl.mode = select_mode_argmin(x, ctrl.eq, ctrl.P, model, 0);

    std::mt19937_64 rng(cfg.seed);
    NoiseState noise = make_noise_state(cfg.noise, dt);

    std::optional<EstimatorState> est;
    if (cfg.estimator_enabled) {
        est = estimator_init(gains, x, cfg.p_guess, cfg.variant);
    }

    SimTrace trace;
    trace.has_switch_events = true;
    trace.reserve(static_cast<std::size_t>(steps / cfg.log_decimation + 1));

    for (std::int64_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const ParamVec p = scenario.p(t);

        const double nu = noise_step(noise, rng, cfg.noise, dt);
        const StateVec x_meas{x.x0 + nu, x.x1 + nu};

        ParamVec p_hat = ctrl.target_params;
        if (est) {
            p_hat = current_estimate(*est, x_meas);
        }

        const bool was_saturated = ctrl.saturated;
        if (cfg.target == TargetSource::Estimated) {
            update_target(ctrl, p_hat, model, cfg.f_target);
        } else if (cfg.target == TargetSource::Exact) {
            update_target(ctrl, p, model, cfg.f_target);
        }
        if (ctrl.saturated && !was_saturated) {
            trace.events.push_back({t, EventKind::Saturation, p_hat.x0});
        }

        const HysteresisDecision d = hysteretic_step(ctrl, x, t, model);
        if (d.switched) {
            trace.events.push_back({t, EventKind::Switch, static_cast<double>(d.mode)});
        }

        if (est) {
            estimator_step(*est, x_meas, d.mode, model, dt);
        }

        if (k % cfg.log_decimation == 0) {
            trace.t.push_back(t);
            trace.iL.push_back(x.x0);
            trace.vo.push_back(x.x1);
            trace.sigma.push_back(d.mode);
            trace.p1_true.push_back(p.x0);
            trace.p2_true.push_back(p.x1);
            trace.p1_hat.push_back(p_hat.x0);
            trace.p2_hat.push_back(p_hat.x1);
            trace.iL_star.push_back(ctrl.eq.x_star.x0);
            trace.vo_star.push_back(ctrl.eq.x_star.x1);
            trace.s_value.push_back(d.s);
            trace.h_value.push_back(ctrl.h);
        }

        x = x + dt * mode_dynamics(model, d.mode, x, p);
        if (!is_finite(x) || (est && !is_finite(est->zeta_hat))) {
            std::ostringstream msg;
            msg << "simulation diverged at t = " << t;
            throw NonFiniteState(msg.str(), t);
        }
    }
    return trace;
}

double measure_switching_frequency(const SimTrace& trace, double t0, double t1) {
    if (!(t1 > t0) || trace.size() == 0 || t0 < trace.t.front() || t0 > trace.t.back()) {
        throw EmptyWindow("switching-frequency window is empty or outside the trace");
    }
    std::int64_t rising = 0;
    if (trace.has_switch_events) {
        for (const TraceEvent& e : trace.events) {
            if (e.kind == EventKind::Switch && e.value == 1.0 && e.t >= t0 && e.t < t1) {
                ++rising;
            }
        }
    } else {
        // Only the logged rows are available; transitions between rows are lost.
        for (std::size_t i = 1; i < trace.size(); ++i) {
            if (trace.t[i] >= t0 && trace.t[i] < t1 && trace.sigma[i - 1] == 0.0 && trace.sigma[i] == 1.0) {
                ++rising;
            }
        }
    }
    return static_cast<double>(rising) / (t1 - t0);
}

SteadyStateMetrics steady_state_metrics(const SimTrace& trace, double t0, double t1, const std::optional<Mat2>& P) {
    SteadyStateMetrics m;
    double sum_vo = 0.0;
    double sum_vo_err = 0.0;
    double sum_p1 = 0.0;
    double sum_p2 = 0.0;
    double sum_v = 0.0;
    double max_v = 0.0;
    double last_v = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.t[i] < t0 || trace.t[i] >= t1) {
            continue;
        }
        ++m.samples;
        const double vo_err = std::abs(trace.vo[i] - trace.vo_star[i]);
        const double p1_err = std::abs(trace.p1_hat[i] - trace.p1_true[i]);
        const double p2_err = std::abs(trace.p2_hat[i] - trace.p2_true[i]);
        sum_vo += trace.vo[i];
        sum_vo_err += vo_err;
        sum_p1 += p1_err;
        sum_p2 += p2_err;
        m.max_abs_vo_error = std::max(m.max_abs_vo_error, vo_err);
        m.max_abs_p1_error = std::max(m.max_abs_p1_error, p1_err);
        m.max_abs_p2_error = std::max(m.max_abs_p2_error, p2_err);
        if (P) {
            const Vec2 e{trace.iL[i] - trace.iL_star[i], trace.vo[i] - trace.vo_star[i]};
            last_v = quad(e, *P, e);
            sum_v += last_v;
            max_v = std::max(max_v, last_v);
        }
    }
    if (m.samples == 0) {
        throw EmptyWindow("no logged samples in the metrics window");
    }
    const auto n = static_cast<double>(m.samples);
    m.mean_vo = sum_vo / n;
    m.mean_abs_vo_error = sum_vo_err / n;
    m.mean_abs_p1_error = sum_p1 / n;
    m.mean_abs_p2_error = sum_p2 / n;
    if (P) {
        m.mean_V = sum_v / n;
        m.max_V = max_v;
        m.final_V = last_v;
    }
    return m;
}

}  // namespace boostctl
