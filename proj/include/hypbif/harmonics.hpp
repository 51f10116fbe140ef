#pragma once

#include "hypbif/core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace hypbif {

enum class GroupKind { Dihedral, Tetrahedral, Octahedral, Icosahedral, HyperIcosahedral, Full };

// Full is the trivial group (no symmetry imposed).
struct SymmetryGroup {
    GroupKind kind = GroupKind::Full;
    int ambient_N = 3;
    int dihedral_order = 0;
    bool rotations_only = false;  // polyhedral groups: drop reflections

    void validate() const;
    std::string name() const;
    static SymmetryGroup parse(const std::string& spec, int N, bool rotations_only = false);
};

struct GroupElement {
    Eigen::MatrixXd matrix;
    double alpha_left = 0.0;   // N = 4: rotation angles of the quaternion pair
    double alpha_right = 0.0;
};

// Orthogonal matrices of the group acting on R^N, identity first.
const std::vector<GroupElement>& group_elements(const SymmetryGroup& group);

struct SpectrumEntry {
    int degree;
    int multiplicity;
    double mu;
};

struct GroupSpectrum {
    SymmetryGroup group;
    std::vector<SpectrumEntry> entries;
};

double sphere_eigenvalue(int k, int N);
long harmonic_dimension(int k, int N);

// Trace of the group element on degree-k harmonics.
double harmonic_character(const SymmetryGroup& group, const GroupElement& g, int k);
int character_multiplicity(const SymmetryGroup& group, int k);

GroupSpectrum group_restricted_spectrum(const SymmetryGroup& group, int k_max);

double g1_threshold(int N);

struct G1Report {
    bool satisfied = false;
    bool multiplicity_odd = false;
    bool degree_strict = false;      // i_1 > threshold
    bool degree_nonstrict = false;   // i_1 >= threshold
    int i1 = 0;
    int m1 = 0;
    double threshold = 0.0;
    double mu_i1 = 0.0;
    double mu_bound = 0.0;           // (4/9)(N+2)(N-1)
    bool mu_bound_holds = false;
};

G1Report check_g1(const GroupSpectrum& spec);

// Normalized zonal harmonic: Gegenbauer C_k^{(N-2)/2}(t) / C_k^{(N-2)/2}(1).
double zonal_harmonic(int k, int N, double t);

int invariant_projection_rank(const SymmetryGroup& group, int degree);

// Orthonormal basis (standard surface measure) of the G-invariant degree-k harmonics, built from
// group-projected reproducing kernels at fixed reference points.
class InvariantBasis {
public:
    InvariantBasis(const SymmetryGroup& group, int degree);

    int degree() const { return degree_; }
    int dimension() const { return static_cast<int>(refs_.cols()); }
    const SymmetryGroup& group() const { return group_; }

    // Values of all basis functions at a unit vector x.
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
    double evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& coefficients) const;

private:
    double projected_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    SymmetryGroup group_;
    int degree_;
    double kernel_scale_;
    Eigen::MatrixXd refs_;
    Eigen::MatrixXd transform_;  // zeta = transform * (P K_{y_j})_j
};

double sphere_area(int N);

// Quadrature of a function over S^{N-1} (standard measure), exact for polynomials up to degree.
double sphere_integral(int N, int degree, const std::function<double(const Eigen::VectorXd&)>& f);

// Deterministic quasi-uniform points on S^{N-1}.
std::vector<Eigen::VectorXd> sphere_points(int N, int count, unsigned long long seed = 1);

}  // namespace hypbif
