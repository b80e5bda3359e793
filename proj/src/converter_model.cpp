#include "boostctl/converter_model.hpp"

#include <cmath>

namespace boostctl {

void CircuitParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidParameter(std::string(name) + " must be positive and finite");
        }
    };
    positive(L, "L");
    positive(C, "C");
    positive(Ro, "Ro");
    positive(vo_ref, "vo_ref");
    positive(vin_min, "vin_min");
    if (!(vin_min <= vin_max)) {
        throw InvalidParameter("vin_min must not exceed vin_max");
    }
    if (!(vin_max < vo_ref)) {
        throw InvalidParameter("vin_max must be below vo_ref (equilibrium unreachable otherwise)");
    }
}

SwitchedModel build_model(const CircuitParams& circuit) {
    circuit.validate();
    const double inv_l = 1.0 / circuit.L;
    const double inv_c = 1.0 / circuit.C;
    const double damping = -1.0 / (circuit.Ro * circuit.C);

    SwitchedModel model;
    model.A0 = {0.0, -inv_l, inv_c, damping};
    model.A1 = {0.0, 0.0, 0.0, damping};
    model.G = Mat2::diag(inv_l, -inv_c);
    model.D = model.A1 - model.A0;
    model.circuit = circuit;
    return model;
}

Mat2 averaged_matrix(const SwitchedModel& model, double duty) {
    if (!(duty >= 0.0 && duty <= 1.0)) {
        throw InvalidParameter("averaged_matrix: duty must lie in [0, 1]");
    }
    return duty * model.A1 + (1.0 - duty) * model.A0;
}

Equilibrium compute_equilibrium(const SwitchedModel& model, const ParamVec& p, double vo_ref) {
    if (!(p.x0 > 0.0) || !(p.x0 < vo_ref) || !std::isfinite(p.x1)) {
        throw UnreachableTarget("equilibrium unreachable: need 0 < vin < vo_ref");
    }
    Equilibrium eq;
    eq.sigma_star = 1.0 - p.x0 / vo_ref;
    const Mat2 a_star = averaged_matrix(model, eq.sigma_star);
    eq.x_star = -(inverse(a_star) * (model.G * p));
    // The first row of A(sigma*) x* + G p = 0 pins vo to vo_ref; drop the rounding.
    eq.x_star.x1 = vo_ref;
    return eq;
}

DutyRange duty_range(const CircuitParams& circuit) {
    return {1.0 - circuit.vin_max / circuit.vo_ref, 1.0 - circuit.vin_min / circuit.vo_ref};
}

}  // namespace boostctl
