#pragma once

#include "hypbif/core.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

namespace hypbif {

enum class Shot { Undershoot, Overshoot };

const char* to_string(Shot s);

struct BracketEntry {
    double slope;
    Shot classification;
};

struct ShootingResult {
    RadialProfile profile;
    double slope_star = 0.0;   // w'(r0) for exterior problems, U(0) for the whole-space problem
    std::vector<BracketEntry> bracket_history;
    double residual_sup = 0.0;
    double match_radius = 0.0;
    double match_defect = 0.0;  // derivative jump where the backward tail is glued on
};

// Shooting on w'(r0) for lambda(w'' + drift w') + w^p - w = 0, w(r0) = 0, w decaying.
ShootingResult solve_radial_problem(const RadialProblem& problem, const NumericsConfig& cfg);

ShootingResult solve_exterior_ground_state(const ModelParams& params, double R,
                                           const NumericsConfig& cfg);

// Second-order finite differences, ghost-node Robin closure, damped Newton; Richardson-combined
// over spacings h and h/2. An empty guess selects the built-in positive bump.
RadialProfile fd_bvp_oracle(const RadialProblem& problem, const NumericsConfig& cfg,
                            const Eigen::VectorXd& initial_guess = Eigen::VectorXd());
RadialProfile fd_bvp_oracle(const ModelParams& params, double R, const NumericsConfig& cfg);

RadialProfile rescale_to_unit(const ShootingResult& w, double R);

RadialProfile lambda_derivative(const RadialProfile& u);

ShootingResult solve_whole_space(const ModelParams& params, const NumericsConfig& cfg);
RadialProfile solve_whole_space_ground_state(const ModelParams& params, const NumericsConfig& cfg);
RadialProfile fd_whole_space_oracle(const ModelParams& params, const NumericsConfig& cfg);

struct ConvergenceEntry {
    double R;
    double h1_distance;
};

std::vector<ConvergenceEntry> convergence_study(const ModelParams& params,
                                                const std::vector<double>& radii,
                                                const NumericsConfig& cfg);

double weighted_h1_distance_to_whole_space(const RadialProfile& w, const RadialProfile& U);

// One-step defect: max over cells of |Phi(w_i, w'_i) - (w_{i+1}, w'_{i+1})| / h, Phi the exact flow,
// relative to max(1, sup |w'|).
double ode_residual_sup(const RadialProfile& w);

double peak_lower_bound(double p);

// Exact: the rescaled curvature -1 problem on B_R^c, kappa = 1/sqrt(lambda).
// Literal: drift (N-1)coth(r) for every lambda.
enum class GeometryMode { Exact, Literal };

const char* to_string(GeometryMode g);
GeometryMode geometry_from_string(const std::string& s);

double geometry_kappa(GeometryMode mode, double lambda);

RadialProfile solve_lambda_form(const ModelParams& params, double lambda, GeometryMode mode,
                                const NumericsConfig& cfg);

// Memoized u_lambda provider: concurrent reads, serialized writes.
class GroundStateCache {
public:
    GroundStateCache(ModelParams params, GeometryMode mode, NumericsConfig cfg)
        : params_(params), mode_(mode), cfg_(cfg) {}

    std::shared_ptr<const RadialProfile> get(double lambda);
    const ModelParams& params() const { return params_; }
    GeometryMode mode() const { return mode_; }
    const NumericsConfig& config() const { return cfg_; }

private:
    ModelParams params_;
    GeometryMode mode_;
    NumericsConfig cfg_;
    std::shared_mutex mutex_;
    std::map<double, std::shared_ptr<const RadialProfile>> cache_;
};

}  // namespace hypbif
