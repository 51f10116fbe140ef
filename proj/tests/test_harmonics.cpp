#include "doctest.h"

#include "hypbif/harmonics.hpp"

#include <cmath>

using namespace hypbif;
using doctest::Approx;

TEST_CASE("sphere eigenvalues and dimensions")
{
    CHECK(sphere_eigenvalue(0, 3) == 0.0);
    CHECK(sphere_eigenvalue(0, 4) == 0.0);
    CHECK(sphere_eigenvalue(2, 3) == 6.0);
    CHECK(sphere_eigenvalue(12, 4) == 168.0);
    CHECK(harmonic_dimension(6, 3) == 13);
    CHECK(harmonic_dimension(3, 2) == 2);
    CHECK(harmonic_dimension(2, 4) == 9);
}

TEST_CASE("dihedral D3 spectrum in the plane")
{
    const auto g = SymmetryGroup::parse("dihedral:3", 2);
    CHECK(group_elements(g).size() == 6);
    const GroupSpectrum s = group_restricted_spectrum(g, 10);
    REQUIRE(s.entries.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(s.entries[j].degree == 3 * (j + 1));
        CHECK(s.entries[j].multiplicity == 1);
        CHECK(s.entries[j].mu == Approx(9.0 * (j + 1) * (j + 1)));
    }
}

TEST_CASE("icosahedral and hyper-icosahedral first degrees")
{
    const auto ico = SymmetryGroup::parse("icosahedral", 3);
    const GroupSpectrum s = group_restricted_spectrum(ico, 8);
    REQUIRE(!s.entries.empty());
    CHECK(s.entries.front().degree == 6);
    CHECK(s.entries.front().multiplicity == 1);

    const auto h4 = SymmetryGroup::parse("hypericosahedral", 4);
    const GroupSpectrum s4 = group_restricted_spectrum(h4, 12);
    REQUIRE(s4.entries.size() == 1);
    CHECK(s4.entries.front().degree == 12);
    CHECK(s4.entries.front().multiplicity == 1);
    CHECK(s4.entries.front().mu == 168.0);
}

TEST_CASE("character multiplicities agree with projection ranks")
{
    const auto ico = SymmetryGroup::parse("icosahedral", 3);
    CHECK(invariant_projection_rank(ico, 1) == 0);
    CHECK(invariant_projection_rank(ico, 6) == 1);
    CHECK(invariant_projection_rank(SymmetryGroup::parse("dihedral:4", 2), 4) == 1);
    for (const char* name : {"tetrahedral", "octahedral", "icosahedral+rotations"}) {
        const auto g = SymmetryGroup::parse(name, 3);
        for (int k = 0; k <= 12; ++k)
            CHECK(character_multiplicity(g, k) == invariant_projection_rank(g, k));
    }
}

TEST_CASE("G1 thresholds and verdicts")
{
    CHECK(g1_threshold(2) == Approx(4.0 / 3.0));
    CHECK(g1_threshold(3) == Approx(5.0 / 3.0));
    CHECK(g1_threshold(4) == 2.0);

    const G1Report d3 = check_g1(group_restricted_spectrum(SymmetryGroup::parse("dihedral:3", 2), 10));
    CHECK(d3.satisfied);
    CHECK(d3.i1 == 3);
    CHECK(d3.m1 == 1);

    const G1Report h4 = check_g1(group_restricted_spectrum(SymmetryGroup::parse("hypericosahedral", 4), 12));
    CHECK(h4.satisfied);

    const G1Report triv = check_g1(group_restricted_spectrum(SymmetryGroup::parse("trivial", 3), 4));
    CHECK_FALSE(triv.satisfied);
    CHECK(triv.i1 == 1);
    CHECK(triv.m1 == 3);
}

TEST_CASE("invariant basis is orthonormal and invariant")
{
    const auto g = SymmetryGroup::parse("icosahedral", 3);
    InvariantBasis b(g, 6);
    REQUIRE(b.dimension() == 1);
    const double norm = sphere_integral(3, 12, [&](const Eigen::VectorXd& x) {
        const double v = b.evaluate(x)[0];
        return v * v;
    });
    CHECK(norm == Approx(1.0).epsilon(1e-12));
    const double mean = sphere_integral(3, 6, [&](const Eigen::VectorXd& x) { return b.evaluate(x)[0]; });
    CHECK(std::abs(mean) < 1e-12);
    const auto& els = group_elements(g);
    for (const auto& x : sphere_points(3, 20, 3))
        for (size_t e = 0; e < els.size(); e += 7)
            CHECK(std::abs(b.evaluate(els[e].matrix * x)[0] - b.evaluate(x)[0]) < 1e-10);
}

TEST_CASE("group parsing")
{
    CHECK_THROWS_AS(SymmetryGroup::parse("dodecahedral", 3), Error);
    CHECK_THROWS_AS(SymmetryGroup::parse("dihedral", 2), Error);
    CHECK_THROWS_AS(SymmetryGroup::parse("icosahedral", 4), Error);
    CHECK(sphere_area(3) == Approx(4 * M_PI));
}
