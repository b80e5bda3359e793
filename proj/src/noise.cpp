#include "boostctl/noise.hpp"

#include "boostctl/converter_model.hpp"

namespace boostctl {

void NoiseConfig::validate() const {
    if (!(power >= 0.0) || !std::isfinite(power)) {
        throw InvalidParameter("noise power must be >= 0");
    }
    if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz)) {
        throw InvalidParameter("noise cutoff must be positive");
    }
}

NoiseState make_noise_state(const NoiseConfig& cfg, double dt) {
    cfg.validate();
    NoiseState s;
    s.filter = HighPassFilter(cfg.cutoff_hz, dt);
    return s;
}

double noise_step(NoiseState& state, std::mt19937_64& rng, const NoiseConfig& cfg, double dt) {
    if (!cfg.enabled || cfg.power == 0.0) {
        return 0.0;
    }
    const double w = white_noise_std(cfg, dt) * state.normal(rng);
    return state.filter.step(w);
}

}  // namespace boostctl
