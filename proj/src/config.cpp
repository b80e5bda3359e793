#include "boostctl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace boostctl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        throw ConfigError("config: bad number for '" + key + "': '" + v + "'");
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    const char* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config: bad integer for '" + key + "': '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "off" || v == "no") {
        return false;
    }
    throw ConfigError("config: bad flag for '" + key + "': '" + v + "'");
}

std::string exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void DesignConfig::validate() const {
    circuit.validate();
    if (!(alpha >= 0.0)) {
        throw ConfigError("config: alpha must be >= 0");
    }
    if (!(lambda > 0.0)) {
        throw ConfigError("config: lambda must be positive");
    }
    if (!(gamma > 1.0)) {
        throw ConfigError("config: gamma must exceed 1");
    }
    if (r < 1) {
        throw ConfigError("config: r must be >= 1");
    }
    if (!(fs_target > 0.0) || !(Ts_divisor > 0.0)) {
        throw ConfigError("config: fs_target and Ts_divisor must be positive");
    }
    if (!(noise_power >= 0.0) || !(noise_cutoff > 0.0)) {
        throw ConfigError("config: noise_power must be >= 0 and noise_cutoff > 0");
    }
    if (log_decimation < 1) {
        throw ConfigError("config: log_decimation must be >= 1");
    }
}

void set_config_value(DesignConfig& cfg, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "L") {
        cfg.circuit.L = to_double(key, v);
    } else if (key == "C") {
        cfg.circuit.C = to_double(key, v);
    } else if (key == "Ro") {
        cfg.circuit.Ro = to_double(key, v);
    } else if (key == "vo_ref") {
        cfg.circuit.vo_ref = to_double(key, v);
    } else if (key == "vin_min") {
        cfg.circuit.vin_min = to_double(key, v);
    } else if (key == "vin_max") {
        cfg.circuit.vin_max = to_double(key, v);
    } else if (key == "alpha") {
        cfg.alpha = to_double(key, v);
    } else if (key == "lambda") {
        cfg.lambda = to_double(key, v);
    } else if (key == "gamma") {
        cfg.gamma = to_double(key, v);
    } else if (key == "r") {
        cfg.r = static_cast<int>(to_integer(key, v));
    } else if (key == "fs_target") {
        cfg.fs_target = to_double(key, v);
    } else if (key == "Ts_divisor") {
        cfg.Ts_divisor = to_double(key, v);
    } else if (key == "noise_power") {
        cfg.noise_power = to_double(key, v);
    } else if (key == "noise_cutoff") {
        cfg.noise_cutoff = to_double(key, v);
    } else if (key == "seed") {
        const long long s = to_integer(key, v);
        if (s < 0) {
            throw ConfigError("config: seed must be non-negative");
        }
        cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "variant") {
        if (v == "basic") {
            cfg.variant = EstimatorVariant::Basic;
        } else if (v == "filtered") {
            cfg.variant = EstimatorVariant::Filtered;
        } else {
            throw ConfigError("config: variant must be 'basic' or 'filtered'");
        }
    } else if (key == "log_decimation") {
        cfg.log_decimation = static_cast<int>(to_integer(key, v));
    } else if (key == "noise_enabled") {
        cfg.noise_enabled = to_bool(key, v);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

void apply_override(DesignConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    }
    set_config_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

DesignConfig parse_config(const std::string& text) {
    DesignConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

DesignConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const DesignConfig& cfg) {
    std::ostringstream out;
    out << "L = " << exact(cfg.circuit.L) << '\n'
        << "C = " << exact(cfg.circuit.C) << '\n'
        << "Ro = " << exact(cfg.circuit.Ro) << '\n'
        << "vo_ref = " << exact(cfg.circuit.vo_ref) << '\n'
        << "vin_min = " << exact(cfg.circuit.vin_min) << '\n'
        << "vin_max = " << exact(cfg.circuit.vin_max) << '\n'
        << "alpha = " << exact(cfg.alpha) << '\n'
        << "lambda = " << exact(cfg.lambda) << '\n'
        << "gamma = " << exact(cfg.gamma) << '\n'
        << "r = " << cfg.r << '\n'
        << "fs_target = " << exact(cfg.fs_target) << '\n'
        << "Ts_divisor = " << exact(cfg.Ts_divisor) << '\n'
        << "noise_power = " << exact(cfg.noise_power) << '\n'
        << "noise_cutoff = " << exact(cfg.noise_cutoff) << '\n'
        << "seed = " << cfg.seed << '\n'
        << "variant = " << (cfg.variant == EstimatorVariant::Basic ? "basic" : "filtered") << '\n'
        << "log_decimation = " << cfg.log_decimation << '\n'
        << "noise_enabled = " << (cfg.noise_enabled ? "true" : "false") << '\n';
    return out.str();
}

SimConfig sim_config(const DesignConfig& cfg) {
    SimConfig s;
    s.Ts = cfg.Ts();
    s.f_target = cfg.fs_target;
    s.noise.power = cfg.noise_power;
    s.noise.cutoff_hz = cfg.noise_cutoff;
    s.noise.enabled = cfg.noise_enabled;
    s.seed = cfg.seed;
    s.variant = cfg.variant;
    s.log_decimation = cfg.log_decimation;
    const double vin_mid = 0.5 * (cfg.circuit.vin_min + cfg.circuit.vin_max);
    s.p_nominal = {vin_mid, 0.0};
    s.p_guess = {vin_mid, 0.0};
    return s;
}

Design run_design(const DesignConfig& cfg) {
    cfg.validate();
    Design d;
    d.model = build_model(cfg.circuit);
    d.cert = solve_common_lyapunov(d.model, cfg.alpha);
    d.gains = design_estimator_gain(ExoSystem{}, d.model, cfg.lambda, cfg.gamma, cfg.r);
    return d;
}

}  // namespace boostctl
