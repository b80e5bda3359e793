#pragma once

// Parameter schedules p(t) = [vin(t), iLoad(t)] for the three validation
// scenarios, plus the simplified PV source and EV battery load behind S3.

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostctl/converter_model.hpp"

namespace boostctl {

struct Scenario {
    std::string name;
    std::function<ParamVec(double)> p_schedule;
    bool estimator_enabled = false;
    double duration = 0.0;
    std::string description;
    /// Instants where p(t) or its slope changes abruptly.
    std::vector<double> breakpoints;

    [[nodiscard]] ParamVec p(double t) const { return p_schedule(t); }
};

/// Step changes of vin and iLoad without estimation (target frozen at nominal).
[[nodiscard]] Scenario scenario_s1();
/// The S1 steps with the estimator updating the target.
[[nodiscard]] Scenario scenario_s2();

struct PvMap {
    double v_nom = 350.0;
    double irr_ref = 1000.0;
    double sensitivity = 0.15;
    double vin_min = 300.0;
    double vin_max = 400.0;
};

/// clamp(v_nom (1 - sensitivity (1 - irr/irr_ref)), vin_min, vin_max)
[[nodiscard]] double pv_voltage(double irr, const PvMap& map);

struct BatteryProfile {
    double capacity_ah = 50.0;
    double v_nominal = 300.0;
    double ramp_slope = 100.0;  // A/s
    double i_cc = 10.0;
    double t_start = 0.1;
    double t_cc_end = 0.2;
    double t_cv = 0.3;
    double cv_decay_tau = 0.5;

    void validate() const;
};

/// Charging current magnitude |i_bat|: zero, ramp, constant-current plateau,
/// then exponential constant-voltage taper.
[[nodiscard]] double battery_current(double t, const BatteryProfile& profile);

/// Converter-side load current reflecting the battery power through a
/// lossless downstream converter: v_bat |i_bat| / vo.
[[nodiscard]] double battery_load_current(double t, const BatteryProfile& profile, double vo);

class TraceTooShort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Piecewise-linear irradiance samples (t in s, W/m^2).
struct IrradianceTrace {
    std::vector<double> t;
    std::vector<double> irr;

    [[nodiscard]] double at(double time) const;
    [[nodiscard]] bool covers(double t0, double t1) const;
};

/// Two-column CSV (t_seconds, irradiance_wm2); a non-numeric first line is
/// treated as a header.
[[nodiscard]] IrradianceTrace load_irradiance_csv(const std::filesystem::path& path);

/// Built-in fluctuating trace around 1000 W/m^2 covering [0, 0.5] s.
[[nodiscard]] IrradianceTrace default_irradiance_trace();

struct S3Options {
    PvMap pv;
    BatteryProfile battery;
    double duration = 0.5;
    /// Output voltage used to reflect battery power into a load current.
    double reflect_voltage = 450.0;
};

/// PV-fed EV charging. Throws TraceTooShort when the trace misses [0, duration].
[[nodiscard]] Scenario scenario_s3(const IrradianceTrace& irradiance, const S3Options& options = {});

/// s1, s2 or s3 (s3 with the default trace); throws std::invalid_argument otherwise.
[[nodiscard]] Scenario scenario_by_name(const std::string& name);

}  // namespace boostctl
