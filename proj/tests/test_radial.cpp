#include "doctest.h"

#include "hypbif/radial.hpp"

#include <cmath>

using namespace hypbif;
using doctest::Approx;

namespace {

// Frozen from fd_bvp_oracle and fd_whole_space_oracle at the default numerics.
constexpr double kSlopeN3p3R1 = 12.323033811;
constexpr double kPeakN3p3R1 = 2.99700568937;
constexpr double kU0N3p3 = 6.56266451814;

}  // namespace

TEST_CASE("exterior ground state N=3 p=3 R=1")
{
    const ModelParams P{3, 3.0};
    const NumericsConfig cfg;
    const ShootingResult s = solve_exterior_ground_state(P, 1.0, cfg);
    CHECK(s.profile.values[0] == 0.0);
    CHECK(s.slope_star == Approx(kSlopeN3p3R1).epsilon(1e-6));
    CHECK(s.profile.values.maxCoeff() == Approx(kPeakN3p3R1).epsilon(1e-6));
    CHECK(s.profile.values.maxCoeff() >= std::sqrt(2.0));
    CHECK(s.residual_sup <= cfg.shoot_tol);
    CHECK(s.profile.values.minCoeff() >= 0.0);

    bool under = false, over = false;
    for (const auto& b : s.bracket_history) {
        under = under || b.classification == Shot::Undershoot;
        over = over || b.classification == Shot::Overshoot;
    }
    CHECK(under);
    CHECK(over);
}

TEST_CASE("shooting agrees with the finite-difference oracle")
{
    const NumericsConfig cfg;
    for (auto [N, p, R] : {std::tuple{3, 3.0, 1.0}, std::tuple{2, 3.0, 2.0}}) {
        const ModelParams P{N, p};
        const RadialProfile a = solve_exterior_ground_state(P, R, cfg).profile;
        const RadialProfile b = fd_bvp_oracle(P, R, cfg);
        REQUIRE(a.size() == b.size());
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("finite-difference oracle from the zero guess")
{
    const NumericsConfig cfg;
    RadialProblem pb{{3, 3.0}, 1.0, 1.0, 1.0};
    const int n = make_grid(pb, cfg).size();
    try {
        fd_bvp_oracle(pb, cfg, Eigen::VectorXd::Zero(n));
        FAIL("expected an oracle failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OracleFailure);
    }
}

TEST_CASE("supercritical exponent is rejected")
{
    try {
        solve_exterior_ground_state({3, 5.0}, 1.0, NumericsConfig{});
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
}

TEST_CASE("rescaling to the unit ball")
{
    const ModelParams P{3, 3.0};
    const ShootingResult w = solve_exterior_ground_state(P, 2.0, NumericsConfig{});
    const RadialProfile u = rescale_to_unit(w, 2.0);
    CHECK(u.meta.lambda == Approx(0.25));
    CHECK(u.grid.r0 == 1.0);
    CHECK(u.values[0] == 0.0);
    CHECK(std::abs(u.values.maxCoeff() - w.profile.values.maxCoeff()) < 1e-8);
}

TEST_CASE("lambda derivative formula")
{
    const ModelParams P{3, 3.0};
    const ShootingResult w = solve_exterior_ground_state(P, 1.0, NumericsConfig{});
    const RadialProfile u = rescale_to_unit(w, 1.0);
    const RadialProfile d = lambda_derivative(u);
    CHECK(d.values[0] == Approx(-u.derivatives[0] / (2 * u.meta.lambda)).epsilon(1e-14));
    int ic = 0;
    u.values.maxCoeff(&ic);
    CHECK(std::abs(d.values[ic]) < 1e-2 * std::abs(d.values[0]));
}

TEST_CASE("lambda form in both geometries")
{
    const ModelParams P{3, 3.0};
    const NumericsConfig cfg;
    const RadialProfile a = solve_lambda_form(P, 1.0, GeometryMode::Exact, cfg);
    const RadialProfile b = solve_lambda_form(P, 1.0, GeometryMode::Literal, cfg);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(geometry_kappa(GeometryMode::Exact, 4.0) == Approx(0.5));
    CHECK(geometry_kappa(GeometryMode::Literal, 4.0) == 1.0);
    CHECK(geometry_from_string("literal") == GeometryMode::Literal);
    CHECK_THROWS_AS(geometry_from_string("flat"), Error);

    GroundStateCache cache(P, GeometryMode::Exact, cfg);
    auto u1 = cache.get(2.0);
    auto u2 = cache.get(2.0);
    CHECK(u1.get() == u2.get());
    CHECK(u1->meta.kappa == Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("whole-space ground state")
{
    const ModelParams P{3, 3.0};
    const ShootingResult U = solve_whole_space(P, NumericsConfig{});
    CHECK(U.profile.derivatives[0] == 0.0);
    CHECK(U.slope_star == Approx(kU0N3p3).epsilon(1e-6));
    for (int i = 0; i + 1 < U.profile.size(); ++i)
        REQUIRE(U.profile.values[i + 1] < U.profile.values[i]);
}

TEST_CASE("convergence study")
{
    const ModelParams P{3, 3.0};
    const NumericsConfig cfg;
    const auto entries = convergence_study(P, {1.0, 0.5, 0.25, 0.1}, cfg);
    REQUIRE(entries.size() == 4);
    for (size_t i = 0; i < entries.size(); ++i) {
        CHECK(entries[i].h1_distance >= 0.0);
        if (i)
            CHECK(entries[i].h1_distance < entries[i - 1].h1_distance);
    }
    CHECK(convergence_study(P, {0.5}, cfg).size() == 1);
}
