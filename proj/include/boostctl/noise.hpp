#pragma once

// High-pass filtered white measurement noise. The white sample has variance
// power/dt (band-limited white noise of intensity `power`); it then passes a
// first-order high-pass discretized with backward Euler.

#include <cmath>
#include <numbers>
#include <random>

namespace boostctl {

struct NoiseConfig {
    double power = 1e-10;    // unit^2 * s
    double cutoff_hz = 1e5;  // high-pass corner
    bool enabled = true;

    void validate() const;
};

class HighPassFilter {
public:
    HighPassFilter() = default;
    HighPassFilter(double cutoff_hz, double dt) : a_(2.0 * std::numbers::pi * cutoff_hz * dt) {}

    double step(double w) {
        low_ = (low_ + a_ * w) / (1.0 + a_);
        return w - low_;
    }

    void reset() { low_ = 0.0; }

private:
    double a_ = 0.0;
    double low_ = 0.0;
};

[[nodiscard]] inline double white_noise_std(const NoiseConfig& cfg, double dt) { return std::sqrt(cfg.power / dt); }

struct NoiseState {
    HighPassFilter filter;
    std::normal_distribution<double> normal{0.0, 1.0};
};

[[nodiscard]] NoiseState make_noise_state(const NoiseConfig& cfg, double dt);

/// One filtered noise sample; zero when disabled or power is zero.
double noise_step(NoiseState& state, std::mt19937_64& rng, const NoiseConfig& cfg, double dt);

}  // namespace boostctl
