#include "hypbif/core.hpp"

#include <algorithm>
#include <limits>

namespace hypbif {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Incompatible: return "incompatible";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::NoDecay: return "no-decay";
    case ErrorKind::NoBracket: return "no-bracket";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::OracleFailure: return "oracle-failure";
    case ErrorKind::LemmaViolation: return "lemma-violation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Validation: return "validation";
    }
    return "unknown";
}

double ModelParams::critical_exponent() const
{
    if (N == 2)
        return std::numeric_limits<double>::infinity();
    return (N + 2.0) / (N - 2.0);
}

void ModelParams::validate() const
{
    if (N < 2)
        throw Error(ErrorKind::Validation, "N must be at least 2");
    if (!(p > 1.0))
        throw Error(ErrorKind::Validation, "p must exceed 1");
    if (!(p < critical_exponent()))
        throw Error(ErrorKind::Validation,
                    "p must be below (N+2)/(N-2) (supercritical exponent)");
}

void NumericsConfig::validate() const
{
    if (grid_points < 64)
        throw Error(ErrorKind::Validation, "grid_points must be at least 64");
    if (!(r_max >= 0.0))
        throw Error(ErrorKind::Validation, "r_max must be nonnegative (0 = automatic)");
    if (!(max_step > 0.0) || !(hole_resolution > 0.0))
        throw Error(ErrorKind::Validation, "grid spacing controls must be positive");
    if (!(ode_rel_tol > 0.0) || !(ode_abs_tol > 0.0) || !(shoot_tol > 0.0) || !(quad_tol > 0.0))
        throw Error(ErrorKind::Validation, "tolerances must be positive");
    if (max_bisect < 1)
        throw Error(ErrorKind::Validation, "max_bisect must be positive");
    if (!(w_ceiling >= 0.0))
        throw Error(ErrorKind::Validation, "w_ceiling must be nonnegative (0 = automatic)");
}

double log_warp(double r, double kappa)
{
    const double x = kappa * r;
    if (x < 20.0)
        return std::log(std::sinh(x) / kappa);
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * kappa);
}

double drift(int N, double r, double kappa)
{
    return (N - 1) * kappa / std::tanh(kappa * r);
}

double decay_exponent(const ModelParams& params, double lambda, double kappa, double tau)
{
    if (!(lambda > 0.0))
        throw Error(ErrorKind::Domain, "lambda must be positive");
    if (!(1.0 - tau > 0.0))
        throw Error(ErrorKind::NoDecay, "tau >= 1: linearized tail does not decay");
    const double a = (params.N - 1) * kappa;
    return 0.5 * (a + std::sqrt(a * a + 4.0 * (1.0 - tau) / lambda));
}

double decay_exponent_nonlinear(const ModelParams& params, double lambda)
{
    return decay_exponent(params, lambda, 1.0, 0.0);
}

double decay_exponent_linearized(const ModelParams& params, double lambda, double tau)
{
    return decay_exponent(params, lambda, 1.0, tau);
}

RadialGrid RadialGrid::uniform(double r0, double r_max, int n_nodes)
{
    if (n_nodes < 2 || !(r_max > r0))
        throw Error(ErrorKind::Configuration, "uniform grid needs r_max > r0 and two nodes");
    RadialGrid g;
    g.r0 = r0;
    g.nodes.resize(n_nodes);
    const double h = (r_max - r0) / (n_nodes - 1);
    for (int i = 0; i < n_nodes; ++i)
        g.nodes[i] = r0 + h * i;
    g.nodes[n_nodes - 1] = r_max;
    return g;
}

bool RadialGrid::is_uniform(double rel) const
{
    const double h = spacing();
    for (int i = 1; i < size(); ++i)
        if (std::abs(nodes[i] - nodes[i - 1] - h) > rel * h)
            return false;
    return true;
}

void RadialGrid::validate() const
{
    if (size() < 2)
        throw Error(ErrorKind::Configuration, "grid needs at least two nodes");
    if (nodes[0] != r0)
        throw Error(ErrorKind::Configuration, "grid must start at r0");
    for (int i = 1; i < size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw Error(ErrorKind::Configuration, "grid nodes must be strictly increasing");
}

namespace {

int locate(const RadialGrid& g, double r)
{
    const int n = g.size();
    const double* x = g.nodes.data();
    const double h = (x[n - 1] - x[0]) / (n - 1);
    int i = std::clamp(static_cast<int>((r - x[0]) / h), 0, n - 2);
    if ((x[i] <= r || i == 0) && (r < x[i + 1] || i == n - 2))
        return i;
    auto it = std::upper_bound(x, x + n, r);
    i = static_cast<int>(it - x) - 1;
    return std::clamp(i, 0, n - 2);
}

}  // namespace

double RadialProfile::operator()(double r) const
{
    const int n = size();
    if (r >= grid.r_max())
        return values[n - 1] * std::exp(-decay_exponent * (r - grid.r_max()));
    const int i = locate(grid, r);
    const double x0 = grid.nodes[i], x1 = grid.nodes[i + 1];
    const double h = x1 - x0;
    const double t = (r - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * values[i] + h10 * h * derivatives[i] + h01 * values[i + 1]
         + h11 * h * derivatives[i + 1];
}

double RadialProfile::derivative(double r) const
{
    const int n = size();
    if (r >= grid.r_max())
        return -decay_exponent * values[n - 1] * std::exp(-decay_exponent * (r - grid.r_max()));
    const int i = locate(grid, r);
    const double x0 = grid.nodes[i], x1 = grid.nodes[i + 1];
    const double h = x1 - x0;
    const double t = (r - x0) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    return d00 * values[i] + d10 * derivatives[i] + d01 * values[i + 1] + d11 * derivatives[i + 1];
}

void RadialProfile::validate() const
{
    grid.validate();
    if (values.size() != grid.nodes.size() || derivatives.size() != grid.nodes.size())
        throw Error(ErrorKind::Consistency, "profile arrays and grid differ in length");
}

double RadialProblem::natural_length() const
{
    return std::min(1.0 / kappa, std::sqrt(lambda));
}

double RadialProblem::default_r_max() const
{
    const double g = gamma() / kappa;
    return r0 + std::max(30.0, 40.0 / g) / kappa;
}

RadialGrid make_grid(const RadialProblem& problem, const NumericsConfig& cfg)
{
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : problem.default_r_max();
    if (!(r_max > problem.r0))
        throw Error(ErrorKind::Configuration, "r_max must exceed the inner radius");
    double h = cfg.max_step * problem.natural_length();
    if (problem.r0 > 0.0)
        h = std::min(h, problem.r0 / cfg.hole_resolution);
    long intervals = static_cast<long>(std::ceil((r_max - problem.r0) / h));
    intervals = std::max<long>(intervals, cfg.grid_points - 1);
    if (intervals % 2)
        ++intervals;
    // An automatic r_max is rounded up to whole cells so h depends continuously on lambda.
    const double end = cfg.r_max > 0.0 || intervals == cfg.grid_points - 1 ? r_max
                                                                            : problem.r0 + intervals * h;
    return RadialGrid::uniform(problem.r0, end, static_cast<int>(intervals + 1));
}

double weighted_exp_tail(int m, double kappa, double a, double rate)
{
    // S^m = (2 kappa)^{-m} sum_j C(m,j) (-1)^j exp(kappa (m - 2j) r)
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= m; ++j) {
        const double c = kappa * (m - 2 * j);
        if (!(rate > c))
            throw Error(ErrorKind::NoDecay, "tail rate does not beat the volume growth");
        const double term = binom * std::exp(c * a) / (rate - c);
        sum += (j % 2 ? -term : term);
        binom = binom * (m - j) / (j + 1);
    }
    return sum / std::pow(2.0 * kappa, m);
}

double weighted_l2_inner(const RadialProfile& f, const RadialProfile& g)
{
    const int n = f.size();
    if (g.size() != n || f.weight_power != g.weight_power
        || std::abs(f.grid.r0 - g.grid.r0) > 1e-12 || std::abs(f.grid.r_max() - g.grid.r_max()) > 1e-9
        || std::abs(f.meta.kappa - g.meta.kappa) > 1e-14)
        throw Error(ErrorKind::Incompatible, "weighted_l2_inner: profiles do not share a grid");
    const int m = f.weight_power;
    const double kappa = f.meta.kappa;
    auto integrand = [&](int i) {
        const double r = f.grid.nodes[i];
        const double fg = f.values[i] * g.values[i];
        if (fg == 0.0)
            return 0.0;
        return fg * std::exp(m * log_warp(r, kappa));
    };
    double sum = 0.0;
    if (f.grid.is_uniform()) {
        const double h = f.grid.spacing();
        const int intervals = n - 1;
        const int simpson_end = (intervals % 2 == 0 || intervals < 3) ? intervals : intervals - 3;
        if (simpson_end >= 2) {
            double s = integrand(0) + integrand(simpson_end);
            for (int i = 1; i < simpson_end; ++i)
                s += (i % 2 ? 4.0 : 2.0) * integrand(i);
            sum += s * h / 3.0;
        }
        if (simpson_end < intervals) {
            if (intervals - simpson_end == 3) {
                const int k = simpson_end;
                sum += 3.0 * h / 8.0
                     * (integrand(k) + 3 * integrand(k + 1) + 3 * integrand(k + 2) + integrand(k + 3));
            } else {
                for (int i = simpson_end; i < intervals; ++i)
                    sum += 0.5 * h * (integrand(i) + integrand(i + 1));
            }
        }
    } else {
        for (int i = 0; i + 1 < n; ++i)
            sum += 0.5 * (f.grid.nodes[i + 1] - f.grid.nodes[i]) * (integrand(i) + integrand(i + 1));
    }
    const double fa = f.values[n - 1], ga = g.values[n - 1];
    if (fa * ga != 0.0)
        sum += fa * ga * weighted_exp_tail(m, kappa, f.grid.r_max(), f.decay_exponent + g.decay_exponent);
    return sum;
}

}  // namespace hypbif
