#pragma once

#include "hypbif/core.hpp"

#include <optional>

namespace hypbif {

enum class SignKind { AlwaysNegative, OneSignChange };

const char* to_string(SignKind k);

struct SignPattern {
    SignKind kind = SignKind::AlwaysNegative;
    std::optional<double> change_point;
    double alpha = 0.0;
    double beta = 0.0;
    double f_first = 0.0;   // F at the first sample
    double f_limit = 0.0;   // F as r -> infinity
    int samples = 0;
};

// F(r) in G'(r) = S^{beta-1} S' F(r), alpha = 2(N-1)/(p+3), beta = alpha(p-1).
double g_prime_factor(const ModelParams& params, double r);

SignPattern analyze_G_sign(const ModelParams& params, double R, int r_samples, double r_end = 0.0);

// Mean of -w'/w over the nodes in [r_a, r_b].
double estimate_decay_rate(const RadialProfile& profile, double r_a, double r_b);
// Default window [r_max - 10, r_max - 2].
double estimate_decay_rate(const RadialProfile& profile);

// sup of -w'/w over nodes with w > 0; compared against N + sqrt(2 + (N-1)^2).
double decay_ratio_sup(const RadialProfile& profile);
double decay_ratio_bound(int N);

// E = lambda w'^2/2 + w^{p+1}/(p+1) - w^2/2 on the grid (derivatives hold E').
RadialProfile energy_profile(const RadialProfile& profile, const ModelParams& params,
                             double quad_tol = 1e-6);

struct ShapeReport {
    double r_peak;
    double peak;
    int critical_points;
};

ShapeReport profile_shape_check(const RadialProfile& profile, const ModelParams& params);

}  // namespace hypbif
