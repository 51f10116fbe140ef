#include "doctest.h"

#include "hypbif/harmonics.hpp"
#include "hypbif/radial.hpp"
#include "hypbif/spectral.hpp"

#include <cmath>
#include <random>

using namespace hypbif;
using doctest::Approx;

namespace {

// Frozen from a doubled-resolution eigensolve (refine_profile) at the default numerics.
constexpr double kTau0N3p3 = -12.2617383073;

const RadialProfile& reference_profile()
{
    static const RadialProfile u = solve_lambda_form({3, 3.0}, 1.0, GeometryMode::Exact, NumericsConfig{});
    return u;
}

ModeFunction mode(const RadialProfile& radial, int degree)
{
    ModeFunction m;
    m.radial = radial;
    m.degree = degree;
    return m;
}

}  // namespace

TEST_CASE("radial spectrum has Morse index one")
{
    const ModelParams P{3, 3.0};
    const RadialProfile& u = reference_profile();
    const auto eig = radial_spectrum(u, P, 2, NumericsConfig{});
    REQUIRE(eig.size() == 2);
    CHECK(eig[0].eigenvalue < 0.0);
    CHECK(eig[1].eigenvalue > 0.0);
    CHECK(eig[0].eigenvalue == Approx(kTau0N3p3).epsilon(1e-6));
    const RadialProfile& z = eig[0].eigenfunction;
    CHECK(z.values[0] == 0.0);
    for (int i = 1; i + 1 < z.size(); ++i)
        REQUIRE(z.values[i] > 0.0);
    RadialOperator op(u, P);
    CHECK(op.mass_norm2(z.values) == Approx(1.0).epsilon(1e-12));
    CHECK(op.negative_count(0.0) == 1);
}

TEST_CASE("quadratic form identities")
{
    const ModelParams P{3, 3.0};
    const RadialProfile& u = reference_profile();
    const auto eig = radial_spectrum(u, P, 1, NumericsConfig{});
    const double tau0 = eig[0].eigenvalue;
    const RadialProfile& z = eig[0].eigenfunction;

    CHECK(std::abs(quadratic_form_Q(mode(z, 0), u, P) - tau0) < 1e-8);

    const double mu = sphere_eigenvalue(6, 3);
    const double sep = tau0 + u.meta.lambda * mu * inverse_square_integral(z, u, P);
    CHECK(std::abs(quadratic_form_Q(mode(z, 6), u, P) - sep) < 1e-8);

    RadialProfile z2 = z;
    z2.values *= 2.0;
    z2.derivatives *= 2.0;
    const double q = quadratic_form_Q(mode(z, 6), u, P);
    CHECK(quadratic_form_Q(mode(z2, 6), u, P) == Approx(4.0 * q).epsilon(1e-13));

    CHECK(quadratic_form_Qtilde(mode(z, 6), u, P) == quadratic_form_Q(mode(z, 6), u, P));
    CHECK(quadratic_form_Qtilde(mode(z, 0), u, P) == quadratic_form_Q(mode(z, 0), u, P));
}

TEST_CASE("quadratic forms reject mismatched inputs")
{
    const ModelParams P{3, 3.0};
    const RadialProfile& u = reference_profile();
    RadialOperator op(u, P);
    const RadialProfile c = nodal_profile(u, op.solve_mode(42.0), op.closure_exponent());
    try {
        quadratic_form_Q(mode(c, 6), u, P);
        FAIL("expected a precondition error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
    const RadialProfile other = solve_lambda_form(P, 2.0, GeometryMode::Exact, NumericsConfig{});
    CHECK_THROWS_AS(quadratic_form_Qtilde(mode(c, 6), other, P), Error);
}

TEST_CASE("boundary term of Q-tilde in the plane")
{
    const ModelParams P{2, 3.0};
    const RadialProfile u = solve_lambda_form(P, 2.0, GeometryMode::Literal, NumericsConfig{});
    RadialOperator op(u, P);
    CHECK(op.boundary_constant() == Approx(1.313035).epsilon(1e-6));
    CHECK(op.boundary_weight() == Approx(std::sinh(1.0)).epsilon(1e-14));

    const RadialProfile c = nodal_profile(u, op.solve_mode(9.0), op.closure_exponent());
    const double q = op.quadratic_form(c.values, 9.0);
    const double qt = quadratic_form_Qtilde(mode(c, 3), u, P);
    const double e2 = std::exp(2.0);
    CHECK(q - qt == Approx(2.0 * (e2 + 1) / (e2 - 1) * std::sinh(1.0)).epsilon(1e-12));
}

TEST_CASE("Lambda_0 lower bound")
{
    CHECK(lambda0_lower_bound(-1.0, 6.0) == Approx(0.230183).epsilon(1e-6));
    CHECK(lambda0_lower_bound(-1.0, 6.0, 1.0) == lambda0_lower_bound(-1.0, 6.0));
    CHECK(lambda0_lower_bound(-0.01, 1000.0) > 0.0);
    CHECK_THROWS_AS(lambda0_lower_bound(0.5, 6.0), Error);

    const double tau0 = radial_spectrum(reference_profile(), {3, 3.0}, 1, NumericsConfig{})[0].eigenvalue;
    const double b = lambda0_lower_bound(tau0, 42.0);
    CHECK(b == Approx(-tau0 * std::sinh(1.0) * std::sinh(1.0) / 42.0).epsilon(1e-14));
    CHECK(b > 0.0);
}

TEST_CASE("weighted boundary inequality on random bumps")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> pick(0.05, 3.0), len(0.2, 6.0);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int N = 2 + t % 3;
        const double r = pick(rng);
        const RadialProfile g = random_bump(rng, N, r, len(rng));
        const InequalitySides s = weighted_boundary_inequality_check(g, N, 4.0 * (N - 1) / 3.0, r);
        REQUIRE(s.lhs <= s.rhs);
        worst = std::max(worst, s.lhs / s.rhs);
    }
    CHECK(worst <= 1.0);

    std::mt19937_64 rng0(1);
    RadialProfile zero = random_bump(rng0, 3, 1.0, 1.0);
    zero.values.setZero();
    zero.derivatives.setZero();
    const InequalitySides s0 = weighted_boundary_inequality_check(zero, 3, 8.0 / 3.0, 1.0);
    CHECK(s0.lhs == 0.0);
    CHECK(s0.rhs == 0.0);
}

TEST_CASE("trace inequality")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> len(0.2, 6.0);
    for (int t = 0; t < 50; ++t) {
        ModeFunction m;
        m.radial = random_bump(rng, 3, 1.0, len(rng));
        m.degree = 6;
        const InequalitySides s = trace_inequality_check({m}, 3, 1.0);
        CHECK(s.lhs <= s.rhs);
    }
    const InequalitySides empty = trace_inequality_check({}, 3, 1.0);
    CHECK(empty.lhs == 0.0);
    CHECK(empty.rhs == 0.0);

    ModeFunction low;
    low.radial = random_bump(rng, 3, 1.0, 1.0);
    low.degree = 1;
    try {
        trace_inequality_check({low}, 3, 1.0);
        FAIL("expected a precondition error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
}

TEST_CASE("proof constant")
{
    const double e2 = std::exp(2.0);
    CHECK(proof_constant() == Approx(3 * (e2 + 1) / (4 * (e2 - 1))).epsilon(1e-15));
    CHECK(proof_constant() == Approx(0.9848).epsilon(1e-4));
    CHECK(proof_constant() < 1.0);
}
