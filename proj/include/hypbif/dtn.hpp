#pragma once

#include "hypbif/core.hpp"
#include "hypbif/harmonics.hpp"
#include "hypbif/radial.hpp"
#include "hypbif/spectral.hpp"

#include <map>
#include <utility>
#include <vector>

namespace hypbif {

// c with c(r0) = 1 solving the degree-k mode equation, Robin closure at r_max; combined over
// spacings h and h/2.
RadialProfile solve_mode_ode(int degree, const RadialProfile& u, const ModelParams& params,
                             const NumericsConfig& cfg);

// -(c'(r0) + (N-1) kappa coth(kappa r0)), one-sided stencil, combined over spacings h and h/2.
double sigma_eigenvalue(int degree, const RadialProfile& u, const ModelParams& params,
                        const NumericsConfig& cfg);

// Same quantity on the grid of u only.
double sigma_single_grid(int degree, const RadialProfile& u, const ModelParams& params);

// Negative eigenvalues of the Dirichlet mode operator; sigma has a pole where this count changes.
int dirichlet_count(int degree, const RadialProfile& u, const ModelParams& params);

// min of Q-tilde/lambda over degree-k trial functions with unit boundary L2 norm, by P1 Galerkin
// with Gauss quadrature; combined over spacings h and h/2.
double variational_sigma(int degree, const RadialProfile& u, const ModelParams& params,
                         const NumericsConfig& cfg);

struct BoundaryMode {
    int degree = 0;
    Eigen::VectorXd coefficients;
};

struct BoundaryFunction {
    SymmetryGroup group;
    std::vector<BoundaryMode> modes;

    void validate(const GroupSpectrum& spectrum) const;
    double evaluate(const Eigen::VectorXd& x) const;
    const BoundaryMode* find(int degree) const;
};

// <v1, v2> on the unit sphere by quadrature of the synthesized functions.
double sphere_inner(const BoundaryFunction& a, const BoundaryFunction& b);

BoundaryFunction apply_H(const BoundaryFunction& v, const RadialProfile& u, const ModelParams& params,
                         const NumericsConfig& cfg);

// H_lambda at a fixed u_lambda; sigma is computed once per degree.
class DtNOperator {
public:
    DtNOperator(RadialProfile u, ModelParams params, NumericsConfig cfg)
        : u_(std::move(u)), params_(params), cfg_(cfg) {}

    double sigma(int degree);
    BoundaryFunction apply(const BoundaryFunction& v);

private:
    RadialProfile u_;
    ModelParams params_;
    NumericsConfig cfg_;
    std::map<int, double> sigma_;
};

// Separated solution psi_v; checks int psi_v z_lambda = 0 and the zero mean of the normal flux.
std::vector<ModeFunction> dirichlet_extension(const BoundaryFunction& v, const RadialProfile& u,
                                              const ModelParams& params, const NumericsConfig& cfg);

// psi_v at (r, x) for a unit vector x.
double evaluate_extension(const std::vector<ModeFunction>& psi, const SymmetryGroup& group, double r,
                          const Eigen::VectorXd& x);

struct SigmaSample {
    double lambda;
    double sigma;
    int dirichlet_count;
};

struct SigmaBracket {
    double lambda_left;
    double lambda_right;
    double sigma_left;
    double sigma_right;
};

struct SigmaCurve {
    int degree = 0;
    std::vector<SigmaSample> samples;
    std::vector<double> poles;             // lambda where the Dirichlet count changes
    std::vector<SigmaBracket> brackets;    // sign changes without a pole in between
};

struct SigmaCurveOptions {
    double lambda0_bound = 0.0;  // samples must lie above this
    int threads = 1;
    double pole_tol = 1e-7;      // relative width of a located pole bracket
    bool resolve_poles = true;
};

SigmaCurve sigma_curve(int degree, const std::vector<double>& lambda_grid, GroundStateCache& cache,
                       const NumericsConfig& cfg, const SigmaCurveOptions& options);

std::vector<double> log_spaced(double a, double b, int count);

// Largest fixed point of lambda = -tau0(lambda) S(1)^2/mu, S(1) = sinh(kappa)/kappa.
double lambda0_bound(double mu_i1, GroundStateCache& cache, const NumericsConfig& cfg);

// Runs fn(i) for i in [0, n) over a fixed number of threads.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace hypbif
