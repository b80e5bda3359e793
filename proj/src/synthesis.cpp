#include "boostctl/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boostctl/direct_search.hpp"

namespace boostctl {

double lmi_slack(const Mat2& P, const Mat2& A, double alpha) {
    const Mat2 pa = P * A;
    const Mat2 m = transpose(pa) + pa + (2.0 * alpha) * P;
    return sym_max_eigenvalue(m);
}

namespace {

// Unconstrained (u, v) -> P with trace 2 and P > 0:
//   p11 = 2 s(u), p22 = 2 - p11, p12 = tanh(v) sqrt(p11 p22).
Mat2 trace_normalized(const std::array<double, 2>& uv) {
    const double s = 1.0 / (1.0 + std::exp(-uv[0]));
    const double p11 = 2.0 * s;
    const double p22 = 2.0 - p11;
    const double p12 = std::tanh(uv[1]) * std::sqrt(p11 * p22);
    return {p11, p12, p12, p22};
}

// The positive-definiteness term carries units of P while the LMI slacks
// carry units of A P; scaling it by max ||A_i||_F keeps it from dominating
// once P is comfortably positive definite.
double merit(const Mat2& P, std::span<const Mat2> vertices, double alpha) {
    double a_scale = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const Mat2& a : vertices) {
        worst = std::max(worst, lmi_slack(P, a, alpha));
        a_scale = std::max(a_scale, frobenius(a));
    }
    const double eps = kLmiTolerance * frobenius(P);
    return std::max(worst, a_scale * (eps - sym_min_eigenvalue(P)));
}

}  // namespace

LyapunovSearch search_common_lyapunov(std::span<const Mat2> vertices, double alpha) {
    const Objective2 objective = [&](const std::array<double, 2>& uv) {
        const double m = merit(trace_normalized(uv), vertices, alpha);
        return std::isfinite(m) ? m : std::numeric_limits<double>::max();
    };

    SimplexResult best{{0.0, 0.0}, std::numeric_limits<double>::infinity(), 0};
    for (double u = -6.0; u <= 6.0; u += 2.0) {
        for (double v = -2.5; v <= 2.5; v += 1.0) {
            const SimplexResult r = nelder_mead(objective, {u, v});
            if (r.value < best.value) {
                best = r;
            }
        }
    }
    // Restarts from the incumbent with shrinking steps get the simplex off kinks
    // of the max-eigenvalue merit.
    for (double step : {0.25, 0.05, 0.01, 0.002}) {
        SimplexOptions opt;
        opt.initial_step = step;
        const SimplexResult r = nelder_mead(objective, best.x, opt);
        if (r.value < best.value) {
            best = r;
        }
    }

    LyapunovSearch out;
    out.P = trace_normalized(best.x);
    out.merit = best.value;
    out.feasible = best.value < -kLmiTolerance * frobenius(out.P);
    return out;
}

double bisect_decay_rate(std::span<const Mat2> vertices, double rel_tol) {
    if (vertices.empty()) {
        throw InvalidParameter("bisect_decay_rate: no vertices");
    }
    if (!search_common_lyapunov(vertices, 0.0).feasible) {
        return 0.0;
    }
    // A + alpha I must be Hurwitz, so alpha < |Re eig(A)| <= ||A||_F.
    double hi = std::numeric_limits<double>::infinity();
    for (const Mat2& a : vertices) {
        hi = std::min(hi, frobenius(a));
    }
    double lo = 0.0;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (search_common_lyapunov(vertices, mid).feasible) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::vector<Mat2> duty_vertices(const SwitchedModel& model) {
    const DutyRange range = duty_range(model.circuit);
    std::vector<Mat2> v{averaged_matrix(model, range.min)};
    if (range.max != range.min) {
        v.push_back(averaged_matrix(model, range.max));
    }
    return v;
}

LyapunovCertificate solve_common_lyapunov(const SwitchedModel& model, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidParameter("solve_common_lyapunov: alpha must be >= 0");
    }
    const std::vector<Mat2> vertices = duty_vertices(model);
    const LyapunovSearch found = search_common_lyapunov(vertices, alpha);
    if (!found.feasible) {
        const double alpha_bar = bisect_decay_rate(vertices);
        std::ostringstream msg;
        msg << "vertex LMIs infeasible for alpha = " << alpha << " (best merit " << found.merit
            << ", achievable decay rate " << alpha_bar << ")";
        throw Infeasible(msg.str(), found.merit, alpha_bar);
    }

    LyapunovCertificate cert;
    cert.P = found.P;
    cert.alpha = alpha;
    cert.slack_min_vertex = lmi_slack(found.P, vertices.front(), alpha);
    cert.slack_max_vertex = lmi_slack(found.P, vertices.back(), alpha);
    cert.pmin_eig = sym_min_eigenvalue(found.P);
    return cert;
}

DecayRateBounds decay_rate_bounds(const SwitchedModel& model) {
    const std::vector<Mat2> vertices = duty_vertices(model);
    DecayRateBounds b;
    b.per_vertex = std::numeric_limits<double>::infinity();
    for (const Mat2& a : vertices) {
        b.per_vertex = std::min(b.per_vertex, bisect_decay_rate(std::span<const Mat2>(&a, 1)));
    }
    b.common = bisect_decay_rate(vertices);
    return b;
}

EstimatorGains design_estimator_gain(const ExoSystem& exo, const SwitchedModel& model, double lambda, double gamma,
                                     int r) {
    if (!exo.is_constant_parameter_model()) {
        throw UnsupportedExoSystem("gain placement is implemented for Ap = 0, Cp = I only");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidParameter("estimator bandwidth lambda must be positive");
    }
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw InvalidParameter("filter ratio gamma must exceed 1");
    }
    if (r < 1) {
        throw InvalidParameter("filter order r must be at least 1");
    }

    EstimatorGains g;
    g.lambda = lambda;
    g.gamma = gamma;
    g.r = r;
    g.exo = exo;
    // kappa G Cp = lambda I  =>  Ap - kappa G Cp = -lambda I.
    g.kappa = lambda * inverse(model.G * exo.Cp);
    g.theta = Mat2::diag(gamma * lambda, gamma * lambda);

    const Mat2 err = exo.Ap - g.kappa * model.G * exo.Cp;
    if (spectral_abscissa(err) > -lambda * (1.0 - 1e-9)) {
        throw InvalidParameter("estimator error dynamics are not placed at -lambda");
    }
    return g;
}

SurfaceRates surface_rates(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq, const ParamVec& p) {
    const Vec2 pdx = P * (model.D * eq.x_star);
    const Vec2 b0 = mode_dynamics(model, 0, eq.x_star, p);
    const Vec2 b1 = mode_dynamics(model, 1, eq.x_star, p);
    return {dot(b0, pdx), dot(b1, pdx)};
}

double predicted_switching_frequency(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq,
                                     const ParamVec& p, double h) {
    const SurfaceRates u = surface_rates(model, P, eq, p);
    const double denom = std::abs(u.u0) + std::abs(u.u1);
    if (denom == 0.0) {
        throw DegenerateEquilibrium("surface rates vanish; switching frequency undefined");
    }
    return std::abs(u.u0 * u.u1) / (2.0 * h * denom);
}

double hysteresis_width(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq, const ParamVec& p,
                        double f_target) {
    if (!(f_target > 0.0)) {
        throw InvalidParameter("target switching frequency must be positive");
    }
    const SurfaceRates u = surface_rates(model, P, eq, p);
    const double denom = std::abs(u.u0) + std::abs(u.u1);
    if (denom == 0.0) {
        throw DegenerateEquilibrium("surface rates vanish; hysteresis width undefined");
    }
    return std::abs(u.u0 * u.u1) / (2.0 * f_target * denom);
}

}  // namespace boostctl
