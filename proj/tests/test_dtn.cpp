#include "doctest.h"

#include "hypbif/dtn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace hypbif;
using doctest::Approx;

namespace {

const ModelParams kP{3, 3.0};

const RadialProfile& profile_at_3()
{
    static const RadialProfile u = solve_lambda_form(kP, 3.0, GeometryMode::Exact, NumericsConfig{});
    return u;
}

BoundaryFunction random_boundary(std::mt19937_64& rng, const SymmetryGroup& g)
{
    std::normal_distribution<double> nd;
    BoundaryFunction v;
    v.group = g;
    for (int d : {6, 10, 12})
        v.modes.push_back({d, Eigen::VectorXd::Constant(1, nd(rng))});
    return v;
}

}  // namespace

TEST_CASE("mode solution")
{
    const NumericsConfig cfg;
    const RadialProfile& u = profile_at_3();
    const RadialProfile c = solve_mode_ode(6, u, kP, cfg);
    CHECK(c.values[0] == 1.0);
    const double r = c.grid.r_max() - 5.0;
    CHECK(-c.derivative(r) / c(r) == Approx(c.decay_exponent).epsilon(5e-2));

    const RadialProfile u2 = refine_profile(u);
    const RadialProfile c2 = solve_mode_ode(6, u2, kP, cfg);
    REQUIRE(c2.size() == 2 * c.size() - 1);
    double diff = 0.0;
    for (int i = 0; i < c.size(); ++i)
        diff = std::max(diff, std::abs(c.values[i] - c2.values[2 * i]));
    CHECK(diff < 1e-6);
}

TEST_CASE("sigma ordering and variational cross-check")
{
    const NumericsConfig cfg;
    const RadialProfile& u = profile_at_3();
    const double s6 = sigma_eigenvalue(6, u, kP, cfg);
    const double s10 = sigma_eigenvalue(10, u, kP, cfg);
    const double s12 = sigma_eigenvalue(12, u, kP, cfg);
    CHECK(s6 < s10);
    CHECK(s10 < s12);
    CHECK(std::abs(s6 - variational_sigma(6, u, kP, cfg)) < 1e-4);
    CHECK(dirichlet_count(6, u, kP) == 0);

    const RadialProfile u50 = solve_lambda_form(kP, 50.0, GeometryMode::Exact, cfg);
    CHECK(sigma_eigenvalue(6, u50, kP, cfg) > 0.0);
}

TEST_CASE("H acts mode-wise and is self-adjoint")
{
    const NumericsConfig cfg;
    const RadialProfile& u = profile_at_3();
    const auto g = SymmetryGroup::parse("icosahedral", 3);
    const GroupSpectrum spec = group_restricted_spectrum(g, 12);

    BoundaryFunction single;
    single.group = g;
    single.modes.push_back({6, Eigen::VectorXd::Constant(1, 2.0)});
    single.validate(spec);
    const BoundaryFunction h = apply_H(single, u, kP, cfg);
    CHECK(h.modes[0].coefficients[0] == Approx(2.0 * sigma_eigenvalue(6, u, kP, cfg)).epsilon(1e-14));

    std::mt19937_64 rng(5);
    for (int t = 0; t < 3; ++t) {
        const BoundaryFunction v1 = random_boundary(rng, g), v2 = random_boundary(rng, g);
        v1.validate(spec);
        const double a = 0.7, b = -1.3;
        BoundaryFunction comb = v1;
        for (size_t m = 0; m < comb.modes.size(); ++m)
            comb.modes[m].coefficients = a * v1.modes[m].coefficients + b * v2.modes[m].coefficients;
        const BoundaryFunction hc = apply_H(comb, u, kP, cfg);
        const BoundaryFunction h1 = apply_H(v1, u, kP, cfg), h2 = apply_H(v2, u, kP, cfg);
        for (size_t m = 0; m < hc.modes.size(); ++m)
            CHECK(hc.modes[m].coefficients[0]
                  == Approx(a * h1.modes[m].coefficients[0] + b * h2.modes[m].coefficients[0]).epsilon(1e-12));
        const double lhs = sphere_inner(h1, v2), rhs = sphere_inner(v1, h2);
        CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(lhs)));
    }

    BoundaryFunction bad = single;
    bad.modes.push_back({0, Eigen::VectorXd::Constant(1, 1.0)});
    CHECK_THROWS_AS(bad.validate(spec), Error);
    BoundaryFunction odd = single;
    odd.modes[0].degree = 7;
    CHECK_THROWS_AS(odd.validate(spec), Error);
}

TEST_CASE("Dirichlet extension")
{
    const NumericsConfig cfg;
    const RadialProfile& u = profile_at_3();
    const auto g = SymmetryGroup::parse("icosahedral", 3);

    BoundaryFunction single;
    single.group = g;
    single.modes.push_back({6, Eigen::VectorXd::Constant(1, 1.0)});
    const auto psi = dirichlet_extension(single, u, kP, cfg);
    REQUIRE(psi.size() == 1);
    const RadialProfile c = solve_mode_ode(6, u, kP, cfg);
    CHECK((psi[0].radial.values - c.values).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 rng(11);
    const auto pts = sphere_points(3, 200, 2);
    for (int t = 0; t < 3; ++t) {
        const BoundaryFunction v = random_boundary(rng, g);
        const auto ext = dirichlet_extension(v, u, kP, cfg);
        double sup_v = 0.0;
        for (const auto& x : pts)
            sup_v = std::max(sup_v, std::abs(v.evaluate(x)));
        double sup_psi = 0.0;
        for (double r : {1.0, 1.01, 1.05, 1.2, 1.5, 2.0, 4.0})
            for (const auto& x : pts)
                sup_psi = std::max(sup_psi, std::abs(evaluate_extension(ext, g, r, x)));
        CHECK(sup_psi <= sup_v * (1 + 1e-12));
    }
}

TEST_CASE("sigma curve preconditions")
{
    const NumericsConfig cfg;
    GroundStateCache cache(kP, GeometryMode::Exact, cfg);
    SigmaCurveOptions opts;
    opts.lambda0_bound = 1.0;
    try {
        sigma_curve(6, {0.9, 2.0}, cache, cfg, opts);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
    CHECK_THROWS_AS(sigma_curve(6, {3.0, 2.0}, cache, cfg, opts), Error);
    CHECK_THROWS_AS(sigma_curve(6, {3.0}, cache, cfg, opts), Error);

    const auto grid = log_spaced(1.0, 50.0, 5);
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == 50.0);
    CHECK(grid[2] == Approx(std::sqrt(50.0)));
}

TEST_CASE("sigma curve brackets a zero")
{
    const NumericsConfig cfg;
    GroundStateCache cache(kP, GeometryMode::Exact, cfg);
    SigmaCurveOptions opts;
    opts.lambda0_bound = 0.5;
    const SigmaCurve c = sigma_curve(6, {1.6, 1.7, 1.8, 3.0}, cache, cfg, opts);
    REQUIRE(c.poles.size() == 1);
    CHECK(c.poles[0] > 1.6);
    CHECK(c.poles[0] < 1.7);
    REQUIRE(c.brackets.size() == 1);
    CHECK(c.brackets[0].sigma_left < 0.0);
    CHECK(c.brackets[0].sigma_right > 0.0);
    for (size_t i = 1; i < c.samples.size(); ++i)
        CHECK(c.samples[i].lambda > c.samples[i - 1].lambda);

    opts.threads = 3;
    const SigmaCurve d = sigma_curve(6, {1.6, 1.7, 1.8, 3.0}, cache, cfg, opts);
    REQUIRE(d.samples.size() == c.samples.size());
    for (size_t i = 0; i < c.samples.size(); ++i) {
        CHECK(d.samples[i].lambda == c.samples[i].lambda);
        CHECK(d.samples[i].sigma == c.samples[i].sigma);
    }
}

TEST_CASE("parallel_for")
{
    std::vector<int> hit(100, 0);
    parallel_for(100, 4, [&](int i) { hit[i] += 1; });
    for (int h : hit)
        CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                        if (i == 7)
                            throw std::runtime_error("x");
                    }),
                    std::runtime_error);
}
