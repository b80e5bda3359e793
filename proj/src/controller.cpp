#include "boostctl/controller.hpp"

#include "boostctl/synthesis.hpp"

namespace boostctl {

int select_mode_argmin(const StateVec& x, const Equilibrium& eq, const Mat2& P, const SwitchedModel& model,
                       int tie_hold) {
    const Vec2 err = x - eq.x_star;
    const double obj0 = quad(err, P, model.A0 * x);
    const double obj1 = quad(err, P, model.A1 * x);
    if (obj0 < obj1) {
        return 0;
    }
    if (obj1 < obj0) {
        return 1;
    }
    return tie_hold;
}

HysteresisDecision hysteretic_step(ControllerState& ctrl, const StateVec& x, double t, const SwitchedModel& model) {
    HysteresisDecision out;
    out.s = switching_function(x, ctrl.eq, ctrl.P, model);
    int next = ctrl.mode;
    if (out.s >= ctrl.h && out.s > 0.0) {
        next = 0;
    } else if (out.s <= -ctrl.h && out.s < 0.0) {
        next = 1;
    }
    if (next != ctrl.mode) {
        ctrl.mode = next;
        ++ctrl.switch_count;
        ctrl.last_switch_time = t;
        out.switched = true;
    }
    out.mode = ctrl.mode;
    return out;
}

bool update_target(ControllerState& ctrl, const ParamVec& p_hat, const SwitchedModel& model, double f_target) {
    if (p_hat == ctrl.target_params && !ctrl.saturated) {
        return false;
    }
    try {
        const Equilibrium eq = compute_equilibrium(model, p_hat, model.circuit.vo_ref);
        const double h = hysteresis_width(model, ctrl.P, eq, p_hat, f_target);
        ctrl.eq = eq;
        ctrl.h = ctrl.h_scale * h;
        ctrl.target_params = p_hat;
        ctrl.saturated = false;
        return false;
    } catch (const UnreachableTarget&) {
    } catch (const DegenerateEquilibrium&) {
    }
    ++ctrl.saturation_count;
    ctrl.saturated = true;
    return true;
}

ControllerState make_controller(const Mat2& P, const ParamVec& p, const SwitchedModel& model, double f_target,
                                int initial_mode, double h_scale) {
    ControllerState ctrl;
    ctrl.P = P;
    ctrl.mode = initial_mode;
    ctrl.eq = compute_equilibrium(model, p, model.circuit.vo_ref);
    ctrl.h_scale = h_scale;
    ctrl.h = h_scale * hysteresis_width(model, P, ctrl.eq, p, f_target);
    ctrl.target_params = p;
    return ctrl;
}

}  // namespace boostctl
