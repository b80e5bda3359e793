#include <catch_amalgamated.hpp>

#include <chrono>

#include "boostctl/synthesis.hpp"

using namespace boostctl;
using Catch::Approx;

namespace {

const SwitchedModel kModel = build_model(CircuitParams{});

// Negative definiteness of a symmetric 2x2 matrix by Sylvester's criterion,
// independent of the eigenvalue routine used by the solver.
bool negative_definite(const Mat2& m) { return m.a < 0.0 && det(m) > 0.0; }

Mat2 lmi_matrix(const Mat2& P, const Mat2& A, double alpha) {
    return transpose(A) * P + P * A + (2.0 * alpha) * P;
}

}  // namespace

TEST_CASE("lmi_slack elementary values") {
    CHECK(lmi_slack(Mat2::identity(), -1.0 * Mat2::identity(), 0.0) == Approx(-2.0));
    CHECK(lmi_slack(Mat2::identity(), -1.0 * Mat2::identity(), 1.0) == Approx(0.0).margin(1e-15));
    CHECK(lmi_slack(Mat2::identity(), Mat2{0, 1, -1, 0}, 0.0) == Approx(0.0).margin(1e-15));
}

TEST_CASE("reference design at alpha = 40 is certified") {
    const auto start = std::chrono::steady_clock::now();
    const LyapunovCertificate cert = solve_common_lyapunov(kModel, 40.0);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 1.0);

    CHECK(cert.P.b == cert.P.c);
    CHECK(trace(cert.P) == Approx(2.0));
    CHECK(cert.pmin_eig > 0.0);
    CHECK(cert.P.a > 0.0);
    CHECK(det(cert.P) > 0.0);

    const double tol = kLmiTolerance * frobenius(cert.P);
    CHECK(cert.slack_min_vertex <= -tol);
    CHECK(cert.slack_max_vertex <= -tol);
    CHECK(negative_definite(lmi_matrix(cert.P, averaged_matrix(kModel, 1.0 / 9.0), 40.0)));
    CHECK(negative_definite(lmi_matrix(cert.P, averaged_matrix(kModel, 1.0 / 3.0), 40.0)));
}

TEST_CASE("property: certificate holds at interior duty values and under scaling") {
    const LyapunovCertificate cert = solve_common_lyapunov(kModel, 40.0);
    for (int i = 1; i <= 20; ++i) {
        const double d = 1.0 / 9.0 + (2.0 / 9.0) * i / 21.0;
        const Mat2 a = averaged_matrix(kModel, d);
        CHECK(lmi_slack(cert.P, a, 40.0) <= 0.0);
        CHECK(negative_definite(lmi_matrix(cert.P, a, 40.0)));
    }
    for (double c : {0.1, 10.0}) {
        const Mat2 scaled = c * cert.P;
        const double tol = kLmiTolerance * frobenius(scaled);
        for (double d : {1.0 / 9.0, 1.0 / 3.0}) {
            CHECK(lmi_slack(scaled, averaged_matrix(kModel, d), 40.0) <= -tol);
        }
    }
}

TEST_CASE("deterministic output") {
    const LyapunovCertificate a = solve_common_lyapunov(kModel, 40.0);
    const LyapunovCertificate b = solve_common_lyapunov(kModel, 40.0);
    CHECK(a.P == b.P);
}

TEST_CASE("alpha beyond the open-loop decay is infeasible") {
    CHECK_THROWS_AS(solve_common_lyapunov(kModel, 2000.0), Infeasible);
    try {
        (void)solve_common_lyapunov(kModel, 2000.0);
    } catch (const Infeasible& e) {
        CHECK(e.best_merit() > 0.0);
        CHECK(e.alpha_bar() > 0.0);
        CHECK(e.alpha_bar() < 1000.0);
    }
    CHECK_THROWS_AS(solve_common_lyapunov(kModel, -1.0), InvalidParameter);
}

TEST_CASE("single Hurwitz vertex at alpha = 0 is feasible") {
    const Mat2 a[] = {Mat2{-1.0, 5.0, 0.0, -3.0}};
    CHECK(search_common_lyapunov(a, 0.0).feasible);
    const Mat2 unstable[] = {Mat2{1.0, 0.0, 0.0, -1.0}};
    CHECK_FALSE(search_common_lyapunov(unstable, 0.0).feasible);
    CHECK(bisect_decay_rate(unstable) == 0.0);
}

TEST_CASE("decay-rate limits") {
    const DecayRateBounds b = decay_rate_bounds(kModel);
    // a single A(sigma) has spectral abscissa -1000 for every sigma
    CHECK(b.per_vertex == Approx(1000.0).epsilon(1e-3));
    CHECK(b.per_vertex <= 1000.0);
    // one P for both vertices: cvxpy/SCS bisection on the two vertex LMIs gives 851.70
    CHECK(b.common == Approx(851.70).epsilon(0.01));
    CHECK(b.common < b.per_vertex);
}

TEST_CASE("estimator gain placement") {
    const EstimatorGains g = design_estimator_gain(ExoSystem{}, kModel, 4000.0, 2.5, 1);
    CHECK(g.kappa.a == Approx(4.0));
    CHECK(g.kappa.d == Approx(-0.2));
    CHECK(g.kappa.b == 0.0);
    CHECK(g.kappa.c == 0.0);
    CHECK(g.lambda_theta() == Approx(10000.0));
    CHECK(g.theta == Mat2::diag(10000.0, 10000.0));

    const Mat2 err = g.exo.Ap - g.kappa * kModel.G * g.exo.Cp;
    for (const auto& ev : eigenvalues(err)) {
        CHECK(ev.real() == Approx(-4000.0).epsilon(1e-9));
        CHECK(ev.imag() == 0.0);
    }

    CircuitParams unit;
    unit.L = 1.0;
    unit.C = 1.0;
    unit.Ro = 1.0;
    const EstimatorGains u = design_estimator_gain(ExoSystem{}, build_model(unit), 1.0, 2.0, 1);
    CHECK(u.kappa.a == Approx(1.0));
    CHECK(u.kappa.d == Approx(-1.0));
}

TEST_CASE("estimator gain preconditions") {
    ExoSystem ramp;
    ramp.Ap = Mat2{0.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(design_estimator_gain(ramp, kModel, 4000.0, 2.5, 1), UnsupportedExoSystem);
    CHECK_THROWS_AS(design_estimator_gain(ExoSystem{}, kModel, 0.0, 2.5, 1), InvalidParameter);
    CHECK_THROWS_AS(design_estimator_gain(ExoSystem{}, kModel, 4000.0, 1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(design_estimator_gain(ExoSystem{}, kModel, 4000.0, 2.5, 0), InvalidParameter);
}

TEST_CASE("surface rates and hysteresis width at nominal input") {
    const ParamVec p{350.0, 0.0};
    const Equilibrium eq = compute_equilibrium(kModel, p, 450.0);
    const Vec2 b0 = mode_dynamics(kModel, 0, eq.x_star, p);
    const Vec2 b1 = mode_dynamics(kModel, 1, eq.x_star, p);
    CHECK(b0.x0 == Approx(-100000.0));
    CHECK(b0.x1 == Approx(257142.857142857));
    CHECK(b1.x0 == Approx(350000.0));
    CHECK(b1.x1 == Approx(-900000.0));

    const LyapunovCertificate cert = solve_common_lyapunov(kModel, 40.0);
    const SurfaceRates u = surface_rates(kModel, cert.P, eq, p);
    // the two modes push s in opposite directions
    CHECK(u.u0 * u.u1 < 0.0);

    const double h = hysteresis_width(kModel, cert.P, eq, p, 2e5);
    CHECK(h > 0.0);
    CHECK(hysteresis_width(kModel, cert.P, eq, p, 4e5) == Approx(h / 2.0).epsilon(1e-14));
    CHECK(predicted_switching_frequency(kModel, cert.P, eq, p, h) == Approx(2e5).epsilon(1e-12));
    CHECK_THROWS_AS(hysteresis_width(kModel, cert.P, eq, p, 0.0), InvalidParameter);
}

TEST_CASE("property: frequency round trip over many operating points") {
    const LyapunovCertificate cert = solve_common_lyapunov(kModel, 40.0);
    for (double vin = 300.0; vin <= 400.0; vin += 10.0) {
        for (double il = 0.0; il <= 20.0; il += 5.0) {
            const ParamVec p{vin, il};
            const Equilibrium eq = compute_equilibrium(kModel, p, 450.0);
            for (double f : {5e4, 2e5, 1e6}) {
                const double h = hysteresis_width(kModel, cert.P, eq, p, f);
                CHECK(predicted_switching_frequency(kModel, cert.P, eq, p, h) == Approx(f).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("degenerate equilibrium has no hysteresis width") {
    // P D x* = 0 makes both surface rates vanish
    const ParamVec p{350.0, 0.0};
    const Equilibrium eq = compute_equilibrium(kModel, p, 450.0);
    CHECK_THROWS_AS(hysteresis_width(kModel, Mat2{}, eq, p, 2e5), DegenerateEquilibrium);
}
