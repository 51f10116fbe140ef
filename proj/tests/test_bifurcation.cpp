#include "doctest.h"

#include "hypbif/bifurcation.hpp"

#include <cmath>

using namespace hypbif;
using doctest::Approx;

namespace {

// Frozen from the reference pipeline run (N=3, p=3, icosahedral, 40 log-spaced samples).
constexpr double kLambdaStarIco = 1.71377281326;

BifurcationPoint reference_point()
{
    BifurcationPoint pt;
    pt.degree = 6;
    pt.lambda_star = kLambdaStarIco;
    pt.radius_star = 1.0 / std::sqrt(kLambdaStarIco);
    pt.kernel_multiplicity = 1;
    return pt;
}

}  // namespace

TEST_CASE("bifurcation radius")
{
    BifurcationPoint pt;
    pt.lambda_star = 0.25;
    CHECK(bifurcation_radius(pt) == Approx(2.0).epsilon(1e-15));
    pt.lambda_star = 1.0;
    CHECK(bifurcation_radius(pt) == 1.0);
}

TEST_CASE("perturbed domain")
{
    const auto g = SymmetryGroup::parse("icosahedral", 3);
    const BifurcationPoint pt = reference_point();

    const BoundaryShape flat = emit_perturbed_domain(pt, 0.0, g, 100);
    for (double r : flat.radii)
        CHECK(r == pt.radius_star);

    const BoundaryShape s = emit_perturbed_domain(pt, 0.1, g, 200);
    CHECK(s.points.size() == 200);
    CHECK(s.invariance_defect < 1e-10);
    CHECK(std::abs(s.mean_perturbation) < 1e-10);
    CHECK(s.degree == 6);

    CHECK_THROWS_AS(emit_perturbed_domain(pt, 0.6, g, 10), Error);
    CHECK_THROWS_AS(emit_perturbed_domain(pt, -0.5, g, 10), Error);
}

TEST_CASE("group certificate")
{
    const CertificateReport triv = certify_group(group_restricted_spectrum(SymmetryGroup::parse("trivial", 3), 6));
    CHECK_FALSE(triv.g1);
    CHECK_FALSE(triv.passed);
    CHECK(triv.failed_stage == "G1");

    const CertificateReport d3 = certify_group(group_restricted_spectrum(SymmetryGroup::parse("dihedral:3", 2), 12));
    CHECK(d3.g1);
    CHECK(d3.multiplicity_odd);
    CHECK(d3.failed_stage.empty());
}

TEST_CASE("no admissible bracket")
{
    const NumericsConfig cfg;
    GroundStateCache cache({3, 3.0}, GeometryMode::Exact, cfg);
    SigmaCurve c;
    c.degree = 6;
    c.samples = {{3.0, 4.0, 0}, {5.0, 4.5, 0}};
    try {
        find_lambda_star(c, cache, cfg, 1);
        FAIL("expected NotFound");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotFound);
    }
}

TEST_CASE("Lambda* for the icosahedral group")
{
    const NumericsConfig cfg;
    const ModelParams P{3, 3.0};
    GroundStateCache cache(P, GeometryMode::Exact, cfg);
    SigmaCurveOptions opts;
    opts.lambda0_bound = 0.5;
    const SigmaCurve c6 = sigma_curve(6, {1.70, 1.73}, cache, cfg, opts);
    const BifurcationPoint pt = find_lambda_star(c6, cache, cfg, 1);
    CHECK(pt.lambda_star == Approx(kLambdaStarIco).epsilon(1e-6));
    CHECK(std::abs(pt.sigma_star) < 1e-8);
    CHECK(pt.sign_left < 0.0);
    CHECK(pt.sign_right > 0.0);
    CHECK(pt.radius_star == Approx(1.0 / std::sqrt(pt.lambda_star)).epsilon(1e-15));

    const GroupSpectrum spec = group_restricted_spectrum(SymmetryGroup::parse("icosahedral", 3), 20);
    const CertificateReport rep = certify_local_bifurcation(pt, spec, cache, cfg);
    CHECK(rep.passed);
    CHECK(rep.crossing_stable);
    CHECK(rep.higher_sigma.size() == 3);

    const SigmaCurve c10 = sigma_curve(10, {0.70, 0.88}, cache, cfg, opts);
    const BifurcationPoint pt10 = find_lambda_star(c10, cache, cfg, 1);
    CHECK(pt10.lambda_star < pt.lambda_star);
}
