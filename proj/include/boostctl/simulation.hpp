#pragma once

// Fixed-step closed-loop simulation of the switched converter with the
// hysteresis controller, the parameter estimator and measurement noise.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostctl/controller.hpp"
#include "boostctl/converter_model.hpp"
#include "boostctl/estimator.hpp"
#include "boostctl/noise.hpp"
#include "boostctl/scenarios.hpp"
#include "boostctl/synthesis.hpp"

namespace boostctl {

class NonFiniteState : public std::runtime_error {
public:
    NonFiniteState(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    [[nodiscard]] double time() const { return t_; }

private:
    double t_;
};

class EmptyWindow : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Where the controller takes its target equilibrium from.
enum class TargetSource {
    Nominal,    // frozen at the nominal parameters
    Estimated,  // updated every sample from the estimator
    Exact,      // updated every sample from the true parameters
};

struct SimConfig {
    double Ts = 5e-8;
    double t_end = 0.4;
    double f_target = 2e5;
    NoiseConfig noise;
    std::uint64_t seed = 1;
    bool estimator_enabled = true;
    EstimatorVariant variant = EstimatorVariant::Filtered;
    int log_decimation = 20;

    TargetSource target = TargetSource::Estimated;
    ParamVec p_nominal{350.0, 0.0};
    ParamVec p_guess{350.0, 0.0};
    /// Initial plant state; defaults to the output capacitor precharged to vin(0).
    std::optional<StateVec> x0;
    /// Multiplies every hysteresis width the controller uses.
    double h_scale = 1.0;

    void validate() const;
};

/// Target source and duration taken from the scenario.
[[nodiscard]] SimConfig configure_for(const Scenario& scenario, SimConfig base);

enum class EventKind { Switch, Saturation };

struct TraceEvent {
    double t = 0.0;
    EventKind kind = EventKind::Switch;
    double value = 0.0;  // new mode for switches, rejected p1_hat for saturations
};

/// Column-oriented trace; one row per logged sample.
struct SimTrace {
    std::vector<double> t, iL, vo, sigma, p1_true, p2_true, p1_hat, p2_hat, iL_star, vo_star, s_value, h_value;
    std::vector<TraceEvent> events;
    /// True when `events` holds every switch (not only the logged rows).
    bool has_switch_events = false;

    [[nodiscard]] std::size_t size() const { return t.size(); }
    void reserve(std::size_t n);
};

inline constexpr const char* kTraceHeader = "t,iL,vo,sigma,p1_true,p2_true,p1_hat,p2_hat,iL_star,vo_star,s_value,h_value";

/// x + dt (A_mode x + G p). Throws NonFiniteState if the result overflows.
[[nodiscard]] StateVec integrate_step(const SwitchedModel& model, int mode, const StateVec& x, const ParamVec& p,
                                      double dt);

/// Throws if max |eig(A_sigma)| Ts >= 1e-3.
void check_euler_margin(const SwitchedModel& model, double Ts);

[[nodiscard]] SimTrace run_closed_loop(const SwitchedModel& model, const LyapunovCertificate& cert,
                                       const EstimatorGains& gains, const Scenario& scenario, const SimConfig& cfg);

/// Rising (0 -> 1) transitions per second over [t0, t1).
[[nodiscard]] double measure_switching_frequency(const SimTrace& trace, double t0, double t1);

struct SteadyStateMetrics {
    std::size_t samples = 0;
    double mean_vo = 0.0;
    double mean_abs_vo_error = 0.0;
    double max_abs_vo_error = 0.0;
    double mean_abs_p1_error = 0.0;
    double mean_abs_p2_error = 0.0;
    double max_abs_p1_error = 0.0;
    double max_abs_p2_error = 0.0;
    // V(x) = (x - x*)ᵀ P (x - x*); only filled when P is supplied.
    std::optional<double> mean_V;
    std::optional<double> max_V;
    std::optional<double> final_V;
};

/// Statistics over logged rows with t in [t0, t1).
[[nodiscard]] SteadyStateMetrics steady_state_metrics(const SimTrace& trace, double t0, double t1,
                                                      const std::optional<Mat2>& P = std::nullopt);

}  // namespace boostctl
