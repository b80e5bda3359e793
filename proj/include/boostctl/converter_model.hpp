#pragma once

// Switched affine model of the ideal DC-DC boost converter
//
//   dx/dt = A_sigma x + G p,   x = [iL, vo],  p = [vin, iLoad],
//
// with sigma = 1 while the switch conducts. The averaged model replaces
// A_sigma by A(d) = d A1 + (1 - d) A0 for a duty cycle d in [0, 1].

#include <stdexcept>
#include <string>

#include "boostctl/linalg.hpp"

namespace boostctl {

/// State vector [iL (A), vo (V)].
using StateVec = Vec2;
/// Parameter vector [vin (V), iLoad (A)].
using ParamVec = Vec2;

class UnreachableTarget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CircuitParams {
    double L = 1e-3;       // H
    double C = 50e-6;      // F
    double Ro = 10.0;      // ohm
    double vo_ref = 450.0; // V
    double vin_min = 300.0;
    double vin_max = 400.0;

    /// Throws InvalidParameter when an invariant is violated.
    void validate() const;
};

struct SwitchedModel {
    Mat2 A0;
    Mat2 A1;
    Mat2 G;
    Mat2 D;  // A1 - A0
    CircuitParams circuit;

    [[nodiscard]] const Mat2& A(int mode) const { return mode == 0 ? A0 : A1; }
};

struct Equilibrium {
    StateVec x_star;
    double sigma_star = 0.0;
};

[[nodiscard]] SwitchedModel build_model(const CircuitParams& circuit);

/// d A1 + (1 - d) A0. Throws InvalidParameter for d outside [0, 1].
[[nodiscard]] Mat2 averaged_matrix(const SwitchedModel& model, double duty);

/// A_mode x + G p
[[nodiscard]] inline Vec2 mode_dynamics(const SwitchedModel& model, int mode, const StateVec& x,
                                        const ParamVec& p) {
    return model.A(mode) * x + model.G * p;
}

/// Steady-state duty cycle 1 - p1/vo_ref and x* = -A(sigma*)^-1 G p.
/// Throws UnreachableTarget unless 0 < p1 < vo_ref.
[[nodiscard]] Equilibrium compute_equilibrium(const SwitchedModel& model, const ParamVec& p, double vo_ref);

/// Duty-cycle vertices [1 - vin_max/vo_ref, 1 - vin_min/vo_ref].
struct DutyRange {
    double min = 0.0;
    double max = 0.0;
};
[[nodiscard]] DutyRange duty_range(const CircuitParams& circuit);

}  // namespace boostctl
