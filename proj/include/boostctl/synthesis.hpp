#pragma once

// Offline design: common quadratic Lyapunov matrix over the duty-cycle
// vertices, parameter-estimator gains, and the hysteresis width that yields
// a requested steady-state switching frequency.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "boostctl/converter_model.hpp"
#include "boostctl/linalg.hpp"

namespace boostctl {

struct LyapunovCertificate {
    Mat2 P;
    double alpha = 0.0;
    double slack_min_vertex = 0.0;  // lambda_max of the LMI at sigma*_min
    double slack_max_vertex = 0.0;  // lambda_max of the LMI at sigma*_max
    double pmin_eig = 0.0;
};

class Infeasible : public std::runtime_error {
public:
    Infeasible(const std::string& what, double best_merit, double alpha_bar)
        : std::runtime_error(what), best_merit_(best_merit), alpha_bar_(alpha_bar) {}

    /// Smallest merit the search reached (positive means no certificate).
    [[nodiscard]] double best_merit() const { return best_merit_; }
    /// Bisected decay-rate limit of the common vertex LMIs.
    [[nodiscard]] double alpha_bar() const { return alpha_bar_; }

private:
    double best_merit_;
    double alpha_bar_;
};

class UnsupportedExoSystem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateEquilibrium : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// lambda_max(Aᵀ P + P A + 2 alpha P)
[[nodiscard]] double lmi_slack(const Mat2& P, const Mat2& A, double alpha);

/// Relative feasibility tolerance; slacks must be <= -kLmiTolerance * ||P||_F.
inline constexpr double kLmiTolerance = 1e-6;

struct LyapunovSearch {
    Mat2 P;          // trace(P) == 2
    double merit = 0.0;
    bool feasible = false;
};

/// Minimizes max_i lambda_max(A_iᵀP + PA_i + 2 alpha P) (and -lambda_min(P))
/// over trace-normalized P by multi-start simplex search.
[[nodiscard]] LyapunovSearch search_common_lyapunov(std::span<const Mat2> vertices, double alpha);

/// Largest alpha in [0, upper bracket] for which the vertex LMIs admit a
/// common P, by bisection to `rel_tol`. Returns 0 when alpha = 0 is infeasible.
[[nodiscard]] double bisect_decay_rate(std::span<const Mat2> vertices, double rel_tol = 1e-4);

/// Vertex matrices A(sigma*_min), A(sigma*_max) (one when the range is a point).
[[nodiscard]] std::vector<Mat2> duty_vertices(const SwitchedModel& model);

/// Throws Infeasible (carrying the common-P decay bound) when no certificate exists.
[[nodiscard]] LyapunovCertificate solve_common_lyapunov(const SwitchedModel& model, double alpha);

struct DecayRateBounds {
    /// Limit of the decay-rate LMI for the worst single vertex matrix A(sigma*).
    double per_vertex = 0.0;
    /// Limit when one P must serve both vertices simultaneously.
    double common = 0.0;
};

[[nodiscard]] DecayRateBounds decay_rate_bounds(const SwitchedModel& model);

/// Exo-system dzeta/dt = Ap zeta, p = Cp zeta with a two-dimensional state.
struct ExoSystem {
    Mat2 Ap{};
    Mat2 Cp = Mat2::identity();

    [[nodiscard]] bool is_constant_parameter_model() const {
        return Ap == Mat2{} && Cp == Mat2::identity();
    }
};

struct EstimatorGains {
    Mat2 kappa;
    double lambda = 0.0;
    Mat2 theta;
    double gamma = 0.0;
    int r = 1;
    ExoSystem exo;

    [[nodiscard]] double lambda_theta() const { return gamma * lambda; }
};

/// Places every eigenvalue of Ap - kappa G Cp at -lambda and sets
/// theta = gamma*lambda*I.
[[nodiscard]] EstimatorGains design_estimator_gain(const ExoSystem& exo, const SwitchedModel& model, double lambda,
                                                   double gamma, int r);

/// u_sigma = b_sigmaᵀ P D x* with b_sigma = A_sigma x* + G p, sigma = 0, 1.
struct SurfaceRates {
    double u0 = 0.0;
    double u1 = 0.0;
};

[[nodiscard]] SurfaceRates surface_rates(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq,
                                         const ParamVec& p);

/// Steady-state switching frequency predicted for hysteresis half-width h.
[[nodiscard]] double predicted_switching_frequency(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq,
                                                   const ParamVec& p, double h);

/// Hysteresis half-width giving steady-state switching frequency f_target.
[[nodiscard]] double hysteresis_width(const SwitchedModel& model, const Mat2& P, const Equilibrium& eq,
                                      const ParamVec& p, double f_target);

}  // namespace boostctl
