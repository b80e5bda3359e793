#pragma once

// Online mode selection: the argmin switching law, its sliding surface
// s(x) = (x - x*)ᵀ P D x, and a hysteresis band |s| < h inside which the
// switch position is held.

#include <cstdint>

#include "boostctl/converter_model.hpp"
#include "boostctl/linalg.hpp"

namespace boostctl {

struct ControllerState {
    int mode = 0;
    Mat2 P;
    double h = 0.0;
    /// Applied to every width computed for this controller.
    double h_scale = 1.0;
    Equilibrium eq;
    ParamVec target_params;  // parameters eq and h were computed from
    std::int64_t switch_count = 0;
    double last_switch_time = 0.0;
    std::int64_t saturation_count = 0;
    bool saturated = false;
};

[[nodiscard]] inline double switching_function(const StateVec& x, const Equilibrium& eq, const Mat2& P,
                                               const SwitchedModel& model) {
    return quad(x - eq.x_star, P, model.D * x);
}

/// argmin over m of (x - x*)ᵀ P A_m x; returns tie_hold on an exact tie.
[[nodiscard]] int select_mode_argmin(const StateVec& x, const Equilibrium& eq, const Mat2& P,
                                     const SwitchedModel& model, int tie_hold);

struct HysteresisDecision {
    int mode = 0;
    double s = 0.0;
    bool switched = false;
};

/// s >= h selects mode 0, s <= -h selects mode 1, otherwise the current mode
/// is held. With h = 0 an exact s = 0 also holds.
HysteresisDecision hysteretic_step(ControllerState& ctrl, const StateVec& x, double t, const SwitchedModel& model);

/// Recomputes the target equilibrium and hysteresis width from p_hat. An
/// unreachable p_hat keeps the previous target and marks a saturation.
/// Returns true when the update was rejected.
bool update_target(ControllerState& ctrl, const ParamVec& p_hat, const SwitchedModel& model, double f_target);

/// Controller aimed at the equilibrium for p, with h sized for f_target.
[[nodiscard]] ControllerState make_controller(const Mat2& P, const ParamVec& p, const SwitchedModel& model,
                                              double f_target, int initial_mode = 0, double h_scale = 1.0);

}  // namespace boostctl
