#pragma once

// Switched parameter estimator for p = [vin, iLoad].
//
// Basic variant (explicit Euler of):
//   dz/dt = (Ap - kGCp) z + (Ap - kGCp) k x - k A_sigma x
//   zeta  = z + k x,   p = Cp zeta
//
// Filtered variant, whose injection term passes through r first-order
// filters of bandwidth theta before reaching the estimate:
//   dzeta/dt = Ap zeta + k z_r
//   deta/dt  = theta [ -(A_sigma + theta) x - G Cp zeta - eta ]
//   dz_i/dt  = theta [ z_{i-1} - z_i ],  i = 2..r
//   z_1      = eta + theta x
//
// Both variants are driven by the measured state x_m.

#include <vector>

#include "boostctl/converter_model.hpp"
#include "boostctl/synthesis.hpp"

namespace boostctl {

enum class EstimatorVariant { Basic, Filtered };

struct EstimatorState {
    Vec2 zeta_hat;
    Vec2 z_hat;             // basic variant intermediate state
    Vec2 eta;               // filtered variant
    std::vector<Vec2> z;    // z_1..z_r; z_1 is algebraic and cached here
    EstimatorGains gains;
    EstimatorVariant variant = EstimatorVariant::Filtered;
};

[[nodiscard]] EstimatorState estimator_init(const EstimatorGains& gains, const StateVec& x0_measured,
                                            const ParamVec& p_guess, EstimatorVariant variant);

/// Estimate at the current instant given the current measurement, without
/// advancing any internal state.
[[nodiscard]] ParamVec current_estimate(const EstimatorState& state, const StateVec& x_measured);

/// Returns the estimate at the current instant, then advances one step of
/// length dt under the switch position `mode`.
ParamVec estimator_step_basic(EstimatorState& state, const StateVec& x_measured, int mode,
                              const SwitchedModel& model, double dt);
ParamVec estimator_step_filtered(EstimatorState& state, const StateVec& x_measured, int mode,
                                 const SwitchedModel& model, double dt);
ParamVec estimator_step(EstimatorState& state, const StateVec& x_measured, int mode, const SwitchedModel& model,
                        double dt);

/// Cp zeta_hat
[[nodiscard]] inline ParamVec estimate(const EstimatorState& state) { return state.gains.exo.Cp * state.zeta_hat; }

}  // namespace boostctl
