#include "boostctl/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace boostctl {

namespace {

struct Step {
    double t;
    double value;
};

// Right-continuous step function: the value of the last step with t <= time.
double step_value(double initial, const std::vector<Step>& steps, double time) {
    double v = initial;
    for (const Step& s : steps) {
        if (time >= s.t) {
            v = s.value;
        }
    }
    return v;
}

ParamVec s1_schedule(double t) {
    static const std::vector<Step> vin_steps{{0.1, 300.0}, {0.2, 400.0}, {0.3, 350.0}};
    static const std::vector<Step> load_steps{{0.15, 20.0}, {0.25, 10.0}, {0.3, 0.0}};
    return {step_value(350.0, vin_steps, t), step_value(0.0, load_steps, t)};
}

}  // namespace

Scenario scenario_s1() {
    Scenario s;
    s.name = "s1";
    s.p_schedule = s1_schedule;
    s.estimator_enabled = false;
    s.duration = 0.4;
    s.description = "step changes of vin and iLoad, target frozen at the nominal equilibrium";
    s.breakpoints = {0.1, 0.15, 0.2, 0.25, 0.3};
    return s;
}

Scenario scenario_s2() {
    Scenario s = scenario_s1();
    s.name = "s2";
    s.estimator_enabled = true;
    s.description = "step changes of vin and iLoad, target updated from the parameter estimator";
    return s;
}

double pv_voltage(double irr, const PvMap& map) {
    const double v = map.v_nom * (1.0 - map.sensitivity * (1.0 - irr / map.irr_ref));
    return std::clamp(v, map.vin_min, map.vin_max);
}

void BatteryProfile::validate() const {
    if (!(t_start < t_cc_end && t_cc_end < t_cv)) {
        throw InvalidParameter("battery profile needs t_start < t_cc_end < t_cv");
    }
    if (!(i_cc > 0.0) || !(ramp_slope > 0.0) || !(cv_decay_tau > 0.0) || !(v_nominal > 0.0)) {
        throw InvalidParameter("battery profile magnitudes must be positive");
    }
}

double battery_current(double t, const BatteryProfile& profile) {
    if (t < profile.t_start) {
        return 0.0;
    }
    if (t < profile.t_cv) {
        return std::min(profile.ramp_slope * (t - profile.t_start), profile.i_cc);
    }
    const double at_cv = std::min(profile.ramp_slope * (profile.t_cv - profile.t_start), profile.i_cc);
    return at_cv * std::exp(-(t - profile.t_cv) / profile.cv_decay_tau);
}

double battery_load_current(double t, const BatteryProfile& profile, double vo) {
    if (!(vo > 0.0)) {
        throw InvalidParameter("battery_load_current: vo must be positive");
    }
    return profile.v_nominal * battery_current(t, profile) / vo;
}

double IrradianceTrace::at(double time) const {
    if (t.empty()) {
        throw TraceTooShort("empty irradiance trace");
    }
    if (time <= t.front()) {
        return irr.front();
    }
    if (time >= t.back()) {
        return irr.back();
    }
    const auto hi = std::upper_bound(t.begin(), t.end(), time);
    const auto i = static_cast<std::size_t>(hi - t.begin());
    const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
    return irr[i - 1] + w * (irr[i] - irr[i - 1]);
}

bool IrradianceTrace::covers(double t0, double t1) const {
    return !t.empty() && t.front() <= t0 && t.back() >= t1;
}

IrradianceTrace load_irradiance_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open irradiance file " + path.string());
    }
    IrradianceTrace trace;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t = 0.0;
        double irr = 0.0;
        if (!(row >> t >> irr)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("malformed irradiance row: " + line);
        }
        first = false;
        if (!trace.t.empty() && !(t > trace.t.back())) {
            throw std::runtime_error("irradiance times must be strictly increasing");
        }
        if (irr < 0.0) {
            throw std::runtime_error("irradiance must be non-negative");
        }
        trace.t.push_back(t);
        trace.irr.push_back(irr);
    }
    return trace;
}

IrradianceTrace default_irradiance_trace() {
    // Knots every 20 ms: passing clouds on a clear-sky baseline, time-contracted.
    static const double values[] = {1000, 1040, 1010, 950,  900, 930, 990, 1060, 1100, 1080, 1020, 960, 880,
                                    850,  890,  970,  1030, 1070, 1050, 1000, 940, 910,  950,  1000, 1020, 1000};
    IrradianceTrace trace;
    for (std::size_t i = 0; i < std::size(values); ++i) {
        trace.t.push_back(0.02 * static_cast<double>(i));
        trace.irr.push_back(values[i]);
    }
    return trace;
}

Scenario scenario_s3(const IrradianceTrace& irradiance, const S3Options& options) {
    options.battery.validate();
    if (!irradiance.covers(0.0, options.duration)) {
        throw TraceTooShort("irradiance trace does not cover [0, duration]");
    }
    auto irr = std::make_shared<const IrradianceTrace>(irradiance);
    Scenario s;
    s.name = "s3";
    s.estimator_enabled = true;
    s.duration = options.duration;
    s.description = "PV-fed EV charging: fluctuating vin, CC ramp / CC / CV battery load";
    s.p_schedule = [irr, options](double t) {
        return ParamVec{pv_voltage(irr->at(t), options.pv),
                        battery_load_current(t, options.battery, options.reflect_voltage)};
    };
    for (double t : irradiance.t) {
        if (t > 0.0 && t < options.duration) {
            s.breakpoints.push_back(t);
        }
    }
    const BatteryProfile& b = options.battery;
    for (double t : {b.t_start, std::min(b.t_start + b.i_cc / b.ramp_slope, b.t_cv), b.t_cv}) {
        s.breakpoints.push_back(t);
    }
    std::sort(s.breakpoints.begin(), s.breakpoints.end());
    s.breakpoints.erase(std::unique(s.breakpoints.begin(), s.breakpoints.end()), s.breakpoints.end());
    return s;
}

Scenario scenario_by_name(const std::string& name) {
    if (name == "s1") {
        return scenario_s1();
    }
    if (name == "s2") {
        return scenario_s2();
    }
    if (name == "s3") {
        return scenario_s3(default_irradiance_trace());
    }
    throw std::invalid_argument("unknown scenario '" + name + "' (expected s1, s2 or s3)");
}

}  // namespace boostctl
