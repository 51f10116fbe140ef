#include "doctest.h"

#include "hypbif/core.hpp"

#include <cmath>
#include <random>

using namespace hypbif;
using doctest::Approx;

TEST_CASE("metric factors at r = 1")
{
    const auto m = metric_factors(1.0);
    const double e2 = std::exp(2.0);
    CHECK(m.cothr == Approx((e2 + 1) / (e2 - 1)).epsilon(1e-15));
    CHECK(m.cothr == Approx(1.313035).epsilon(1e-6));
    CHECK(m.S == Approx(1.175201).epsilon(1e-6));
    CHECK(m.S * m.S == Approx(1.381098).epsilon(1e-6));
    CHECK(std::abs(metric_factors(12.0).cothr - 1.0) < 1e-8);
    CHECK_THROWS_AS(metric_factors(0.0), Error);
    CHECK_THROWS_AS(metric_factors(-1.0), Error);
}

TEST_CASE("curvature-scaled metric factors")
{
    const double k = 0.5, r = 1.3;
    const auto m = metric_factors(r, k);
    CHECK(m.S == Approx(std::sinh(k * r) / k).epsilon(1e-15));
    CHECK(m.cothr == Approx(k / std::tanh(k * r)).epsilon(1e-15));
    CHECK(log_warp(r, k) == Approx(std::log(m.S)).epsilon(1e-14));
    CHECK(drift(3, r, k) == Approx(2 * m.cothr).epsilon(1e-14));
    CHECK(std::isfinite(log_warp(800.0, 1.0)));
}

TEST_CASE("decay exponents")
{
    CHECK(decay_exponent_nonlinear({2, 3.0}, 1.0) == Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(decay_exponent_nonlinear({3, 3.0}, 1.0) == Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(decay_exponent_nonlinear({3, 3.0}, 4.0) == Approx((2 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(decay_exponent_linearized({3, 3.0}, 1.0, 0.0) == Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(decay_exponent_linearized({2, 3.0}, 1.0, 0.0) == Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(decay_exponent_linearized({3, 3.0}, 1.0, -1.0) == Approx((2 + std::sqrt(12.0)) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(decay_exponent_linearized({3, 3.0}, 1.0, 1.0), Error);
    CHECK(decay_exponent({3, 3.0}, 1.0, 1.0) == Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("model parameter validation")
{
    CHECK_NOTHROW(ModelParams{3, 3.0}.validate());
    CHECK_NOTHROW(ModelParams{2, 7.0}.validate());
    CHECK_THROWS_AS(ModelParams({3, 5.0}).validate(), Error);
    CHECK_THROWS_AS(ModelParams({4, 3.0}).validate(), Error);
    CHECK_THROWS_AS(ModelParams({3, 1.0}).validate(), Error);
    CHECK_THROWS_AS(ModelParams({1, 2.0}).validate(), Error);
    NumericsConfig c;
    CHECK_NOTHROW(c.validate());
    c.grid_points = 10;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("automatic grid")
{
    RadialProblem pb{{3, 3.0}, 1.0, 1.0, 1.0};
    NumericsConfig cfg;
    const RadialGrid g = make_grid(pb, cfg);
    CHECK(g.r0 == 1.0);
    CHECK(g.is_uniform());
    CHECK(g.r_max() >= 31.0 - 1e-12);
    CHECK(g.spacing() <= cfg.max_step * (1 + 1e-12));
}

namespace {

RadialProfile exp_profile(double gamma, int N, double a, double b, int n)
{
    RadialProfile f;
    f.grid = RadialGrid::uniform(a, b, n);
    f.values = (-gamma * f.grid.nodes.array()).exp();
    f.derivatives = -gamma * f.values;
    f.decay_exponent = gamma;
    f.weight_power = N - 1;
    return f;
}

}  // namespace

TEST_CASE("weighted inner product")
{
    const double gamma = 1 + std::sqrt(2.0);
    RadialProfile f = exp_profile(gamma, 3, 1.0, 30.0, 20001);
    // sinh^2(r) e^{-2 gamma r} = (e^{(2-2g)r} - 2 e^{-2gr} + e^{-(2+2g)r}) / 4
    auto F = [&](double r) {
        return (std::exp((2 - 2 * gamma) * r) / (2 - 2 * gamma) + std::exp(-2 * gamma * r) / gamma
                - std::exp(-(2 + 2 * gamma) * r) / (2 + 2 * gamma)) / 4.0;
    };
    CHECK(std::abs(weighted_l2_inner(f, f) + F(1.0)) < 1e-6);

    RadialProfile z = f;
    z.values.setZero();
    CHECK(weighted_l2_inner(z, z) == 0.0);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    RadialProfile a = exp_profile(2.0, 3, 1.0, 5.0, 401), b = a;
    for (int i = 0; i < a.size(); ++i) {
        a.values[i] = nd(rng);
        b.values[i] = nd(rng);
    }
    CHECK(weighted_l2_inner(a, b) == Approx(weighted_l2_inner(b, a)).epsilon(1e-14));

    RadialProfile c = exp_profile(2.0, 3, 1.0, 6.0, 401);
    CHECK_THROWS_AS(weighted_l2_inner(a, c), Error);
}

TEST_CASE("weighted exponential tail")
{
    const double a = 20.0, rate = 3.0;
    // S = sinh, m = 2: closed form of int_a^inf sinh^2(r) e^{-rate (r - a)} dr
    const double expect = std::exp(rate * a)
                          * (std::exp((2 - rate) * a) / (rate - 2) - 2 * std::exp(-rate * a) / rate
                             + std::exp(-(2 + rate) * a) / (rate + 2)) / 4.0;
    CHECK(weighted_exp_tail(2, 1.0, a, rate) == Approx(expect).epsilon(1e-10));
}
