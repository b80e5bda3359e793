#include "boostctl/estimator.hpp"

#include <stdexcept>

namespace boostctl {

EstimatorState estimator_init(const EstimatorGains& gains, const StateVec& x0_measured, const ParamVec& p_guess,
                              EstimatorVariant variant) {
    if (variant == EstimatorVariant::Filtered && gains.r < 1) {
        throw InvalidParameter("filtered estimator needs r >= 1");
    }
    EstimatorState s;
    s.gains = gains;
    s.variant = variant;
    s.zeta_hat = inverse(gains.exo.Cp) * p_guess;
    if (variant == EstimatorVariant::Basic) {
        s.z_hat = s.zeta_hat - gains.kappa * x0_measured;
    } else {
        s.eta = -(gains.theta * x0_measured);
        s.z.assign(static_cast<std::size_t>(gains.r), Vec2{});
    }
    return s;
}

ParamVec current_estimate(const EstimatorState& state, const StateVec& x_measured) {
    if (state.variant == EstimatorVariant::Basic) {
        return state.gains.exo.Cp * (state.z_hat + state.gains.kappa * x_measured);
    }
    return estimate(state);
}

ParamVec estimator_step_basic(EstimatorState& state, const StateVec& x_measured, int mode,
                              const SwitchedModel& model, double dt) {
    const EstimatorGains& g = state.gains;
    const Mat2 err_dyn = g.exo.Ap - g.kappa * model.G * g.exo.Cp;

    state.zeta_hat = state.z_hat + g.kappa * x_measured;
    const Vec2 dz = err_dyn * state.z_hat + err_dyn * (g.kappa * x_measured) - g.kappa * (model.A(mode) * x_measured);
    state.z_hat = state.z_hat + dt * dz;
    return g.exo.Cp * state.zeta_hat;
}

ParamVec estimator_step_filtered(EstimatorState& state, const StateVec& x_measured, int mode,
                                 const SwitchedModel& model, double dt) {
    const EstimatorGains& g = state.gains;
    const std::size_t r = state.z.size();
    if (r == 0) {
        throw InvalidParameter("filtered estimator stepped without filter states");
    }
    const ParamVec p_now = g.exo.Cp * state.zeta_hat;

    state.z[0] = state.eta + g.theta * x_measured;
    const Vec2 z_r = state.z[r - 1];

    const Vec2 dzeta = g.exo.Ap * state.zeta_hat + g.kappa * z_r;
    const Vec2 deta =
        g.theta * (-((model.A(mode) + g.theta) * x_measured) - model.G * (g.exo.Cp * state.zeta_hat) - state.eta);

    // Walk the cascade from the tail so each stage reads its predecessor's
    // value from the start of the step.
    for (std::size_t i = r - 1; i >= 1; --i) {
        state.z[i] = state.z[i] + dt * (g.theta * (state.z[i - 1] - state.z[i]));
    }
    state.zeta_hat = state.zeta_hat + dt * dzeta;
    state.eta = state.eta + dt * deta;
    return p_now;
}

ParamVec estimator_step(EstimatorState& state, const StateVec& x_measured, int mode, const SwitchedModel& model,
                        double dt) {
    if (!(dt > 0.0)) {
        throw InvalidParameter("estimator step needs dt > 0");
    }
    return state.variant == EstimatorVariant::Basic ? estimator_step_basic(state, x_measured, mode, model, dt)
                                                    : estimator_step_filtered(state, x_measured, mode, model, dt);
}

}  // namespace boostctl
