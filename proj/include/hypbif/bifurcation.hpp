#pragma once

#include "hypbif/dtn.hpp"
#include "hypbif/harmonics.hpp"

#include <string>
#include <vector>

namespace hypbif {

struct BifurcationPoint {
    int degree = 0;
    double lambda_star = 0.0;
    double radius_star = 0.0;
    double sigma_star = 0.0;
    double delta = 0.0;
    double sign_left = 0.0;    // sigma(lambda* - delta)
    double sign_right = 0.0;   // sigma(lambda* + delta)
    double half_left = 0.0;    // sigma(lambda* - delta/2)
    double half_right = 0.0;   // sigma(lambda* + delta/2)
    int kernel_multiplicity = 0;
    int iterations = 0;
    std::vector<SigmaBracket> candidates;  // every admissible bracket of the curve
};

// Root of sigma in the rightmost bracket with sigma < 0 on the left, refined to |sigma| < sigma_tol.
BifurcationPoint find_lambda_star(const SigmaCurve& curve, GroundStateCache& cache, const NumericsConfig& cfg,
                                  int multiplicity, double sigma_tol = 1e-8);

double bifurcation_radius(const BifurcationPoint& point);

struct BoundaryShape {
    double base_radius = 0.0;
    double epsilon = 0.0;
    int degree = 0;
    Eigen::VectorXd coefficients;
    std::vector<Eigen::VectorXd> points;
    std::vector<double> radii;
    double mean_perturbation = 0.0;   // spherical mean of radius/R* - 1
    double invariance_defect = 0.0;   // max |zeta(g x) - zeta(x)| over samples and checked elements
};

BoundaryShape emit_perturbed_domain(const BifurcationPoint& point, double epsilon, const SymmetryGroup& group,
                                    int n_samples, unsigned seed = 1);

struct CertificateReport {
    bool crossing = false;
    bool crossing_stable = false;
    bool g1 = false;
    bool multiplicity_odd = false;
    bool higher_modes_positive = false;
    bool passed = false;
    std::string failed_stage;
    std::vector<std::pair<int, double>> higher_sigma;  // (degree, sigma at lambda*)
};

// (G1) verdict alone; used before any solve.
CertificateReport certify_group(const GroupSpectrum& spectrum);

CertificateReport certify_local_bifurcation(const BifurcationPoint& point, const GroupSpectrum& spectrum,
                                            GroundStateCache& cache, const NumericsConfig& cfg,
                                            int higher_modes = 3);

}  // namespace hypbif
