#pragma once

#include "hypbif/core.hpp"
#include "hypbif/harmonics.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace hypbif {

// Flux-form discretization of psi -> -lambda Delta psi + (1 - p u^{p-1}) psi + lambda mu/S^2 psi
// on the grid of u, with the weight S^{N-1} evaluated through its logarithm. Node 0 is the
// Dirichlet boundary; the Robin closure at r_max uses the tau = 0 decay exponent.
class RadialOperator {
public:
    RadialOperator(const RadialProfile& u, const ModelParams& params);

    int size() const { return static_cast<int>(r_.size()); }
    double spacing() const { return h_; }
    double lambda() const { return lambda_; }
    double kappa() const { return kappa_; }
    double closure_exponent() const { return gamma_; }
    const Eigen::VectorXd& nodes() const { return r_; }
    const ModelParams& params() const { return params_; }

    // Symmetrized matrix M^{-1/2} K M^{-1/2} on nodes 1..n.
    void symmetric_matrix(double mu, Eigen::VectorXd& diag, Eigen::VectorXd& off) const;

    // Negative eigenvalues of the Dirichlet problem (Sturm count).
    int negative_count(double mu, double shift = 0.0) const;

    // Discrete Q over all nodes (the node-0 value enters through the half cell).
    double quadratic_form(const Eigen::VectorXd& psi, double mu) const;
    double mass_norm2(const Eigen::VectorXd& psi) const;
    double mass_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    double inverse_square_integral(const Eigen::VectorXd& psi) const;  // sum m_i psi_i^2 / S_i^2

    // Solution of the mode equation with psi(r0) = 1 and the closure at r_max.
    Eigen::VectorXd solve_mode(double mu) const;

    double boundary_weight() const;    // S^{N-1}(r0)
    double boundary_constant() const;  // (N-1) kappa coth(kappa r0)

    // Discrete eigenpairs of the Dirichlet problem, vectors in nodal values (node 0 = 0).
    void eigenpairs(double mu, int count, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) const;

private:
    ModelParams params_;
    double lambda_, kappa_, h_, gamma_;
    Eigen::VectorXd r_, lw_, lwh_, coef_, v0_, inv_s2_;
};

struct EigenPair {
    double eigenvalue;
    RadialProfile eigenfunction;
};

struct ModeFunction {
    RadialProfile radial;
    int degree = 0;
    Eigen::VectorXd coefficients;  // over the invariant eigenspace, unit Euclidean norm

    double coefficient_norm2() const
    {
        return coefficients.size() ? coefficients.squaredNorm() : 1.0;
    }
};

// Profile carrying nodal values on the grid of u (derivatives by central differences).
RadialProfile nodal_profile(const RadialProfile& u, const Eigen::VectorXd& values, double decay);

// Hermite resampling of u onto the grid with spacing h/2.
RadialProfile refine_profile(const RadialProfile& u);

std::vector<EigenPair> radial_spectrum(const RadialProfile& u, const ModelParams& params, int n_eigs,
                                       const NumericsConfig& cfg);

double quadratic_form_Q(const ModeFunction& psi, const RadialProfile& u, const ModelParams& params);
double quadratic_form_Qtilde(const ModeFunction& psi, const RadialProfile& u, const ModelParams& params);

// int S^{N-3} psi^2 dr in the discrete rule of the operator.
double inverse_square_integral(const RadialProfile& psi, const RadialProfile& u, const ModelParams& params);

double lambda0_lower_bound(double tau0, double mu_i1);
// Same bound with S(1) = sinh(kappa)/kappa.
double lambda0_lower_bound(double tau0, double mu_i1, double kappa);

struct InequalitySides {
    double lhs;
    double rhs;
};

// S^{N-2}(r) g(r)^2 <= (1/lw) int_r^inf g'^2 S^{N-1} + (2 - N + lw) int_r^inf g^2 S^{N-3}.
InequalitySides weighted_boundary_inequality_check(const RadialProfile& g, int N, double lambda_w, double r,
                                                   double quad_tol = 1e-10);

// (1/S(R)) int_{dB_R} psi^2 <= (3/(4(N-1))) int_{B_R^c} |grad psi|^2 in separated form.
InequalitySides trace_inequality_check(const std::vector<ModeFunction>& psi, int N, double R,
                                       double quad_tol = 1e-10);

// Smooth bump g(r) = A * poly((r - a)/L) * exp(1 - 1/(1 - t^2)) on [a, a + L], g(a) != 0.
RadialProfile random_bump(std::mt19937_64& rng, int N, double a, double length, int nodes = 4001);

double proof_constant();  // 3(e^2+1)/(4(e^2-1))

}  // namespace hypbif
