#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace hypbif {

enum class ErrorKind {
    Domain,
    Incompatible,
    Configuration,
    NoDecay,
    NoBracket,
    Convergence,
    OracleFailure,
    LemmaViolation,
    Precondition,
    Degeneracy,
    NotFound,
    Consistency,
    Validation
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct ModelParams {
    int N = 3;
    double p = 3.0;

    void validate() const;
    // (N+2)/(N-2) for N >= 3, +inf for N = 2.
    double critical_exponent() const;
};

struct NumericsConfig {
    double r_max = 0.0;            // 0 selects r0 + max(30, 40/gamma) in curvature units
    int grid_points = 64;          // lower bound on node count
    double max_step = 0.001;       // bulk spacing in natural length units
    double hole_resolution = 200;  // nodes per unit of inner radius
    double ode_rel_tol = 1e-12;
    double ode_abs_tol = 1e-14;
    double shoot_tol = 1e-6;
    int max_bisect = 60;
    double w_ceiling = 0.0;        // 0 selects 1000*((p+1)/2)^{1/(p-1)}
    double quad_tol = 1e-6;

    void validate() const;
};

// Radial metric factors of the space form of curvature -kappa^2.
template <class Scalar>
struct MetricFactors {
    Scalar S;
    Scalar C;
    Scalar cothr;
};

template <class Scalar>
MetricFactors<Scalar> metric_factors(Scalar r)
{
    using std::cosh;
    using std::sinh;
    if (!(r > Scalar(0)))
        throw Error(ErrorKind::Domain, "metric_factors: r must be positive");
    const Scalar s = sinh(r);
    const Scalar c = cosh(r);
    return {s, c, c / s};
}

template <class Scalar>
MetricFactors<Scalar> metric_factors(Scalar r, Scalar kappa)
{
    auto m = metric_factors<Scalar>(kappa * r);
    return {m.S / kappa, m.C, kappa * m.cothr};
}

// log(sinh(kappa r)/kappa), stable for large kappa r.
double log_warp(double r, double kappa);
// (N-1) kappa coth(kappa r); the radial drift of the Laplacian.
double drift(int N, double r, double kappa);

double decay_exponent_nonlinear(const ModelParams& params, double lambda);
double decay_exponent_linearized(const ModelParams& params, double lambda, double tau);
double decay_exponent(const ModelParams& params, double lambda, double kappa, double tau = 0.0);

struct RadialGrid {
    double r0 = 0.0;
    Eigen::VectorXd nodes;

    static RadialGrid uniform(double r0, double r_max, int n_nodes);
    int size() const { return static_cast<int>(nodes.size()); }
    double r_max() const { return nodes[nodes.size() - 1]; }
    double spacing() const { return nodes[1] - nodes[0]; }
    bool is_uniform(double rel = 1e-9) const;
    void validate() const;
};

struct ProfileMeta {
    int N = 0;
    double p = 0.0;
    double R = 1.0;       // inner radius of the original problem
    double lambda = 1.0;
    double kappa = 1.0;   // curvature scale of the warping function
    double residual = 0.0;
};

struct RadialProfile {
    RadialGrid grid;
    Eigen::VectorXd values;
    Eigen::VectorXd derivatives;
    double decay_exponent = 0.0;
    int weight_power = 0;
    ProfileMeta meta;

    int size() const { return grid.size(); }
    double operator()(double r) const;
    double derivative(double r) const;
    void validate() const;
};

// Geometry of one radial solve: lambda(u'' + drift u') + u^p - u = 0 on [r0, inf).
struct RadialProblem {
    ModelParams params;
    double lambda = 1.0;
    double kappa = 1.0;
    double r0 = 1.0;

    double gamma() const { return decay_exponent(params, lambda, kappa); }
    double natural_length() const;
    double default_r_max() const;
};

RadialGrid make_grid(const RadialProblem& problem, const NumericsConfig& cfg);

double weighted_l2_inner(const RadialProfile& f, const RadialProfile& g);

// int_a^inf S_kappa(r)^m exp(-rate (r - a)) dr.
double weighted_exp_tail(int m, double kappa, double a, double rate);

}  // namespace hypbif
