#pragma once

// Flat `key = value` design/run configuration. Lines starting with '#' and
// trailing '# ...' comments are ignored; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostctl/converter_model.hpp"
#include "boostctl/estimator.hpp"
#include "boostctl/noise.hpp"
#include "boostctl/simulation.hpp"

namespace boostctl {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DesignConfig {
    CircuitParams circuit;
    double alpha = 40.0;
    double lambda = 4000.0;
    double gamma = 2.5;
    int r = 1;
    double fs_target = 2e5;
    double Ts_divisor = 100.0;  // Ts = 1 / (Ts_divisor fs_target)
    double noise_power = 1e-10;
    double noise_cutoff = 1e5;
    std::uint64_t seed = 1;
    EstimatorVariant variant = EstimatorVariant::Filtered;
    int log_decimation = 20;
    bool noise_enabled = true;

    [[nodiscard]] double Ts() const { return 1.0 / (Ts_divisor * fs_target); }
    void validate() const;
};

/// Sets one key from its textual value. Throws ConfigError on an unknown key
/// or a malformed value.
void set_config_value(DesignConfig& cfg, const std::string& key, const std::string& value);

/// "key=value" form used by command-line overrides.
void apply_override(DesignConfig& cfg, const std::string& assignment);

[[nodiscard]] DesignConfig parse_config(const std::string& text);
[[nodiscard]] DesignConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, one `key = value` per line, in a form
/// parse_config reads back exactly.
[[nodiscard]] std::string format_config(const DesignConfig& cfg);

/// Simulation settings implied by the configuration (duration and target
/// source still come from the scenario).
[[nodiscard]] SimConfig sim_config(const DesignConfig& cfg);

/// Offline artifacts derived from a configuration.
struct Design {
    SwitchedModel model;
    LyapunovCertificate cert;
    EstimatorGains gains;
};

/// Builds the model, solves the vertex LMIs at cfg.alpha and places the
/// estimator gains. Throws Infeasible when the LMIs have no solution.
[[nodiscard]] Design run_design(const DesignConfig& cfg);

}  // namespace boostctl
