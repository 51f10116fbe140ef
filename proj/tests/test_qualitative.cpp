#include "doctest.h"

#include "hypbif/qualitative.hpp"
#include "hypbif/radial.hpp"

#include <cmath>

using namespace hypbif;
using doctest::Approx;

TEST_CASE("G' sign pattern")
{
    const SignPattern two = analyze_G_sign({2, 3.0}, 1.0, 2000);
    CHECK(two.kind == SignKind::AlwaysNegative);
    CHECK_FALSE(two.change_point.has_value());
    CHECK(two.f_limit < 0.0);

    // Sampled once and recorded; either pattern is admissible for N >= 3.
    const SignPattern three = analyze_G_sign({3, 2.0}, 0.5, 2000);
    CHECK(three.kind == SignKind::AlwaysNegative);
    CHECK(analyze_G_sign({3, 2.0}, 0.5, 8000).kind == three.kind);

    const SignPattern four = analyze_G_sign({4, 1.5}, 0.5, 2000);
    CHECK(four.kind == SignKind::OneSignChange);
    REQUIRE(four.change_point.has_value());
    CHECK(g_prime_factor({4, 1.5}, *four.change_point * 0.99) > 0.0);
    CHECK(g_prime_factor({4, 1.5}, *four.change_point * 1.01) < 0.0);

    CHECK_THROWS_AS(analyze_G_sign({3, 3.0}, 0.0, 100), Error);
}

TEST_CASE("F is strictly decreasing for N >= 3")
{
    for (auto [N, p] : {std::pair{3, 2.0}, {3, 4.5}, {4, 2.5}}) {
        double prev = g_prime_factor({N, p}, 0.2);
        for (double r = 0.25; r < 8.0; r += 0.05) {
            const double f = g_prime_factor({N, p}, r);
            CHECK(f < prev);
            prev = f;
        }
    }
}

TEST_CASE("decay rate and ratio bound")
{
    const NumericsConfig cfg;
    const RadialProfile w2 = solve_exterior_ground_state({2, 3.0}, 1.0, cfg).profile;
    CHECK(estimate_decay_rate(w2, 20.0, 28.0) == Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-2));
    CHECK(decay_ratio_sup(w2) < decay_ratio_bound(2));

    const RadialProfile w3 = solve_exterior_ground_state({3, 2.0}, 1.0, cfg).profile;
    CHECK(std::abs(estimate_decay_rate(w3, 20.0, 28.0) - (1 + std::sqrt(2.0))) < 1e-2);
    CHECK(std::abs(estimate_decay_rate(w3) - (1 + std::sqrt(2.0))) < 1e-2);
    CHECK(decay_ratio_sup(w3) < decay_ratio_bound(3));
    CHECK(decay_ratio_bound(3) == Approx(3 + std::sqrt(6.0)));
    CHECK_THROWS_AS(estimate_decay_rate(w3, 5.0, 5.0), Error);
}

TEST_CASE("energy is nonincreasing and vanishes at infinity")
{
    const ModelParams P{3, 3.0};
    const RadialProfile w = solve_exterior_ground_state(P, 1.0, NumericsConfig{}).profile;
    const RadialProfile E = energy_profile(w, P);
    CHECK(E.values[0] == Approx(0.5 * w.derivatives[0] * w.derivatives[0]).epsilon(1e-14));
    CHECK(E.values[0] > 0.0);
    const double scale = E.values.cwiseAbs().maxCoeff();
    for (int i = 0; i + 1 < E.size(); ++i)
        REQUIRE(E.values[i + 1] <= E.values[i] + 1e-10 * scale);
    CHECK(std::abs(E.values[E.size() - 1]) < 1e-6);
}

TEST_CASE("single peak above the lower bound")
{
    const NumericsConfig cfg;
    const ModelParams P{3, 3.0};
    const ShapeReport s = profile_shape_check(solve_exterior_ground_state(P, 1.0, cfg).profile, P);
    CHECK(s.critical_points == 1);
    CHECK(s.peak >= std::sqrt(2.0));
    CHECK(peak_lower_bound(3.0) == Approx(std::sqrt(2.0)));

    const ModelParams Q{2, 5.0};
    const ShapeReport t = profile_shape_check(solve_exterior_ground_state(Q, 1.0, cfg).profile, Q);
    CHECK(t.critical_points == 1);
    CHECK(peak_lower_bound(5.0) == Approx(std::pow(3.0, 0.25)));
    CHECK(t.peak >= peak_lower_bound(5.0));
}
