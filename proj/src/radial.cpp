#include "hypbif/radial.hpp"

#include "hypbif/ode.hpp"
#include "hypbif/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <cstdio>
#include <cstdlib>

namespace hypbif {

const char* to_string(Shot s)
{
    return s == Shot::Undershoot ? "UNDERSHOOT" : "OVERSHOOT";
}

const char* to_string(GeometryMode g)
{
    return g == GeometryMode::Exact ? "exact" : "literal";
}

GeometryMode geometry_from_string(const std::string& s)
{
    if (s == "exact")
        return GeometryMode::Exact;
    if (s == "literal")
        return GeometryMode::Literal;
    throw Error(ErrorKind::Validation, "geometry must be 'exact' or 'literal'");
}

double geometry_kappa(GeometryMode mode, double lambda)
{
    return mode == GeometryMode::Exact ? 1.0 / std::sqrt(lambda) : 1.0;
}

double peak_lower_bound(double p)
{
    return std::pow((p + 1.0) / 2.0, 1.0 / (p - 1.0));
}

namespace {

using State = Eigen::Vector2d;

struct Rhs {
    int N;
    double p, lambda, kappa;
    State operator()(double r, const State& y) const
    {
        const double w = y[0], dw = y[1];
        const double nl = std::pow(std::abs(w), p - 1.0) * w - w;
        return State(dw, -drift(N, r, kappa) * dw - nl / lambda);
    }
};

double nonlinearity(double w, double p)
{
    return std::pow(std::abs(w), p - 1.0) * w - w;
}

double ceiling_for(const RadialProblem& pb, const NumericsConfig& cfg)
{
    if (cfg.w_ceiling > 0.0)
        return cfg.w_ceiling;
    return 1000.0 * peak_lower_bound(pb.params.p) * std::max(1.0, pb.kappa * std::sqrt(pb.lambda));
}

struct Run {
    Shot cls = Shot::Undershoot;
    std::vector<double> w, dw;  // stored node values (node 0 included)
};

struct Shooter {
    const RadialProblem& pb;
    const RadialGrid& grid;
    const NumericsConfig& cfg;
    bool whole_space;
    double ceiling;
    double gamma;
    Rhs rhs;

    // Integrate from node 0 (or the regularized start) and classify. Stores every node if requested.
    Run run(double shoot, bool store) const
    {
        Run out;
        const int n = grid.size();
        State y;
        double r_start;
        if (whole_space) {
            const double u0 = shoot;
            const double c = (u0 - std::pow(u0, pb.params.p)) / (pb.lambda * pb.params.N);
            r_start = 1e-6;
            y = State(u0 + 0.5 * c * r_start * r_start, c * r_start);
            if (store) {
                out.w.push_back(u0);
                out.dw.push_back(0.0);
            }
        } else {
            if (shoot == 0.0) {
                out.cls = Shot::Undershoot;
                return out;
            }
            r_start = grid.r0;
            y = State(0.0, shoot);
            if (store) {
                out.w.push_back(0.0);
                out.dw.push_back(shoot);
            }
        }
        const double h_node = grid.spacing();
        const int stride = store ? 1
                                 : std::max(1, static_cast<int>(0.02 * pb.natural_length() / h_node));
        DormandPrince<2> dp(cfg.ode_rel_tol, cfg.ode_abs_tol);
        double h = 0.0;
        double r = r_start;
        bool peaked = false;
        for (int i = stride; ; i += stride) {
            const int k = std::min(i, n - 1);
            if (store) {
                dp.advance(rhs, r, grid.nodes[k], y, h);
            } else {
                dp.advance(rhs, r, grid.nodes[k], y, h);
            }
            r = grid.nodes[k];
            if (store) {
                out.w.push_back(y[0]);
                out.dw.push_back(y[1]);
            }
            if (!std::isfinite(y[0]) || y[0] < 0.0 || y[0] > ceiling) {
                out.cls = Shot::Overshoot;
                return out;
            }
            if (y[1] < 0.0)
                peaked = true;
            else if (peaked) {
                out.cls = Shot::Undershoot;
                return out;
            }
            if (k == n - 1)
                break;
        }
        out.cls = (y[1] + gamma * y[0] > 0.0) ? Shot::Undershoot : Shot::Overshoot;
        return out;
    }

    // Decaying branch integrated backward from r_max with Robin data, down to node i_stop.
    Run tail(double amplitude, int i_stop) const
    {
        Run out;
        const int n = grid.size();
        State y(amplitude, -gamma * amplitude);
        DormandPrince<2> dp(cfg.ode_rel_tol, cfg.ode_rel_tol * amplitude * 1e-3);
        double h = 0.0;
        out.w.assign(n - i_stop, 0.0);
        out.dw.assign(n - i_stop, 0.0);
        out.w.back() = y[0];
        out.dw.back() = y[1];
        for (int k = n - 2; k >= i_stop; --k) {
            dp.advance(rhs, grid.nodes[k + 1], grid.nodes[k], y, h);
            out.w[k - i_stop] = y[0];
            out.dw[k - i_stop] = y[1];
        }
        return out;
    }
};

ShootingResult shoot(const RadialProblem& pb, const NumericsConfig& cfg, bool whole_space)
{
    pb.params.validate();
    cfg.validate();
    const RadialGrid grid = make_grid(pb, cfg);
    const Shooter sh{pb, grid, cfg, whole_space, ceiling_for(pb, cfg), pb.gamma(),
                     Rhs{pb.params.N, pb.params.p, pb.lambda, pb.kappa}};
    ShootingResult res;
    double lo = whole_space ? 1.0 : 0.0;
    double hi = whole_space ? 2.0 : 1.0;
    res.bracket_history.push_back({lo, Shot::Undershoot});
    bool found = false;
    for (int k = 0; k < cfg.max_bisect; ++k) {
        const Shot c = sh.run(hi, false).cls;
        res.bracket_history.push_back({hi, c});
        if (c == Shot::Overshoot) {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if (!found)
        throw Error(ErrorKind::NoBracket, "no overshooting initial value found by doubling");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        const Shot c = sh.run(mid, false).cls;
        res.bracket_history.push_back({mid, c});
        (c == Shot::Undershoot ? lo : hi) = mid;
    }
    const Run a = sh.run(lo, true);
    const Run b = sh.run(hi, true);
    const int len = static_cast<int>(std::min(a.w.size(), b.w.size()));
    int i_peak = 0;
    for (int i = 0; i < len; ++i)
        if (a.w[i] > a.w[i_peak])
            i_peak = i;
    const double peak = a.w[i_peak];
    int i_match = -1;
    for (int i = i_peak + 1; i < len; ++i) {
        const double wa = a.w[i], wb = b.w[i];
        if (std::abs(wa - wb) > 1e-8 * std::abs(wa))
            break;
        i_match = i;
        if (wa < 1e-3 * peak)
            break;
    }
    if (i_match < 0 || i_match <= i_peak)
        throw Error(ErrorKind::Convergence, "shooting trajectories diverge before the decay region");
    const double w_m = 0.5 * (a.w[i_match] + b.w[i_match]);
    const double dw_m = 0.5 * (a.dw[i_match] + b.dw[i_match]);
    const double gamma = sh.gamma;
    const double r_max = grid.r_max();
    double a0 = w_m * std::exp(-gamma * (r_max - grid.nodes[i_match]));
    Run t0 = sh.tail(a0, i_match);
    double f0 = t0.w[0] - w_m;
    double a1 = a0 * w_m / t0.w[0];
    Run t1 = sh.tail(a1, i_match);
    double f1 = t1.w[0] - w_m;
    for (int it = 0; it < 30 && std::abs(f1) > 1e-15 * w_m && f1 != f0; ++it) {
        const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        a0 = a1;
        f0 = f1;
        a1 = a2;
        t1 = sh.tail(a1, i_match);
        f1 = t1.w[0] - w_m;
    }
    const int n = grid.size();
    RadialProfile prof;
    prof.grid = grid;
    prof.values.resize(n);
    prof.derivatives.resize(n);
    for (int i = 0; i < i_match; ++i) {
        prof.values[i] = 0.5 * (a.w[i] + b.w[i]);
        prof.derivatives[i] = 0.5 * (a.dw[i] + b.dw[i]);
    }
    for (int i = i_match; i < n; ++i) {
        prof.values[i] = t1.w[i - i_match];
        prof.derivatives[i] = t1.dw[i - i_match];
    }
    prof.values[i_match] = w_m;
    prof.derivatives[i_match] = dw_m;
    if (!whole_space)
        prof.values[0] = 0.0;
    else
        prof.derivatives[0] = 0.0;
    prof.decay_exponent = gamma;
    prof.weight_power = pb.params.N - 1;
    prof.meta = ProfileMeta{pb.params.N, pb.params.p, pb.r0, pb.lambda, pb.kappa, 0.0};
    res.profile = std::move(prof);
    res.slope_star = 0.5 * (lo + hi);
    res.match_radius = grid.nodes[i_match];
    res.match_defect = std::abs(dw_m - t1.dw[0]);
    res.residual_sup = ode_residual_sup(res.profile);
    res.profile.meta.residual = res.residual_sup;
    if (res.residual_sup > cfg.shoot_tol)
        throw Error(ErrorKind::Convergence, "ground-state ODE residual above shoot_tol");
    for (int i = 1; i < n; ++i)
        if (!(res.profile.values[i] > 0.0))
            throw Error(ErrorKind::Convergence, "ground state not positive in the interior");
    return res;
}

}  // namespace

double ode_residual_sup(const RadialProfile& w)
{
    const auto& g = w.grid;
    const int n = g.size();
    const Rhs rhs{w.meta.N, w.meta.p, w.meta.lambda, w.meta.kappa};
    DormandPrince<2> dp(1e-12, 1e-16);
    double res = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double r0 = g.nodes[i], r1 = g.nodes[i + 1];
        if (!(r0 > 0.0))
            continue;
        State y(w.values[i], w.derivatives[i]);
        double h = r1 - r0;
        dp.advance(rhs, r0, r1, y, h);
        const double e = std::max(std::abs(y[0] - w.values[i + 1]), std::abs(y[1] - w.derivatives[i + 1]))
                       / (r1 - r0);
        res = std::max(res, e);
    }
    return res / std::max(1.0, w.derivatives.cwiseAbs().maxCoeff());
}

ShootingResult solve_radial_problem(const RadialProblem& problem, const NumericsConfig& cfg)
{
    if (!(problem.r0 > 0.0))
        throw Error(ErrorKind::Domain, "exterior problem needs a positive inner radius");
    return shoot(problem, cfg, false);
}

ShootingResult solve_exterior_ground_state(const ModelParams& params, double R,
                                           const NumericsConfig& cfg)
{
    if (!(R > 0.0))
        throw Error(ErrorKind::Domain, "R must be positive");
    return solve_radial_problem(RadialProblem{params, 1.0, 1.0, R}, cfg);
}

ShootingResult solve_whole_space(const ModelParams& params, const NumericsConfig& cfg)
{
    return shoot(RadialProblem{params, 1.0, 1.0, 0.0}, cfg, true);
}

RadialProfile solve_whole_space_ground_state(const ModelParams& params, const NumericsConfig& cfg)
{
    return solve_whole_space(params, cfg).profile;
}

namespace {

RadialGrid refine(const RadialGrid& g)
{
    return RadialGrid::uniform(g.r0, g.r_max(), 2 * g.size() - 1);
}

// Damped Newton on the collocated equations; u holds all nodes, u[0] fixed unless whole_space.
bool newton_fd(const RadialProblem& pb, const RadialGrid& g, Eigen::VectorXd& u, bool whole_space)
{
    const int M = g.size() - 1;
    const double h = g.spacing();
    const double lam = pb.lambda, p = pb.params.p, gamma = pb.gamma();
    const int N = pb.params.N;
    const int i0 = whole_space ? 0 : 1;
    const int m = M + 1 - i0;
    Eigen::VectorXd d(M + 1);
    for (int i = 0; i <= M; ++i)
        d[i] = g.nodes[i] > 0.0 ? drift(N, g.nodes[i], pb.kappa) : 0.0;
    auto residual = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd F(m);
        for (int i = i0; i <= M; ++i) {
            double lap;
            if (i == 0)
                lap = 2.0 * N * (v[1] - v[0]) / (h * h);
            else if (i == M) {
                const double ghost = v[M - 1] - 2.0 * h * gamma * v[M];
                lap = (ghost - 2.0 * v[M] + v[M - 1]) / (h * h) + d[M] * (ghost - v[M - 1]) / (2.0 * h);
            } else
                lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h) + d[i] * (v[i + 1] - v[i - 1]) / (2.0 * h);
            F[i - i0] = lam * lap + nonlinearity(v[i], p);
        }
        return F;
    };
    Eigen::VectorXd F = residual(u);
    double fn = F.norm();
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd sub(m - 1), diag(m), sup(m - 1);
        for (int i = i0; i <= M; ++i) {
            const int k = i - i0;
            const double fp = p * std::pow(std::abs(u[i]), p - 1.0) - 1.0;
            if (i == 0) {
                diag[k] = -2.0 * N * lam / (h * h) + fp;
                sup[k] = 2.0 * N * lam / (h * h);
            } else if (i == M) {
                diag[k] = lam * (-2.0 - 2.0 * h * gamma) / (h * h) - lam * d[M] * gamma + fp;
                sub[k - 1] = 2.0 * lam / (h * h);
            } else {
                diag[k] = -2.0 * lam / (h * h) + fp;
                if (k > 0)
                    sub[k - 1] = lam * (1.0 / (h * h) - d[i] / (2.0 * h));
                sup[k] = lam * (1.0 / (h * h) + d[i] / (2.0 * h));
            }
        }
        Eigen::VectorXd delta = solve_tridiagonal<double>(sub, diag, sup, -F);
        const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
        if (delta.cwiseAbs().maxCoeff() < 1e-12 * scale)
            return true;
        double t = 1.0;
        bool accepted = false;
        Eigen::VectorXd trial(u.size());
        while (t > 1e-8) {
            trial = u;
            trial.segment(i0, m) += t * delta;
            const Eigen::VectorXd Ft = residual(trial);
            const double ft = Ft.norm();
            if (std::isfinite(ft) && ft < (1.0 - 1e-4 * t) * fn) {
                u = trial;
                F = Ft;
                fn = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
            return delta.cwiseAbs().maxCoeff() < 1e-9 * scale;
    }
    return false;
}

double linear_interpolate(const RadialGrid& g, const Eigen::VectorXd& v, double r)
{
    const int n = g.size();
    const double h = g.spacing();
    const int i = std::clamp(static_cast<int>((r - g.r0) / h), 0, n - 2);
    const double t = std::clamp((r - g.nodes[i]) / h, 0.0, 1.0);
    return (1.0 - t) * v[i] + t * v[i + 1];
}

Eigen::VectorXd bump(const RadialProblem& pb, const RadialGrid& g, double amp, double centre)
{
    const double l = pb.natural_length();
    const double A = amp * peak_lower_bound(pb.params.p);
    Eigen::VectorXd u(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double x = (g.nodes[i] - pb.r0) / l;
        const double s = 1.0 / std::cosh(x - centre);
        const double shape = std::pow(s, 2.0 / (pb.params.p - 1.0));
        u[i] = A * shape * (pb.r0 > 0.0 ? std::tanh(2.0 * x) : 1.0);
    }
    return u;
}

RadialProfile fd_profile(const RadialProblem& pb, const RadialGrid& g, const Eigen::VectorXd& u)
{
    const int n = g.size();
    const double h = g.spacing();
    RadialProfile prof;
    prof.grid = g;
    prof.values = u;
    prof.derivatives.resize(n);
    for (int i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n)
            prof.derivatives[i] = (-u[i + 2] + 8 * u[i + 1] - 8 * u[i - 1] + u[i - 2]) / (12 * h);
        else if (i < 2)
            prof.derivatives[i] =
                (-25 * u[i] + 48 * u[i + 1] - 36 * u[i + 2] + 16 * u[i + 3] - 3 * u[i + 4]) / (12 * h);
        else
            prof.derivatives[i] =
                (25 * u[i] - 48 * u[i - 1] + 36 * u[i - 2] - 16 * u[i - 3] + 3 * u[i - 4]) / (12 * h);
    }
    if (pb.r0 == 0.0)
        prof.derivatives[0] = 0.0;
    prof.decay_exponent = pb.gamma();
    prof.weight_power = pb.params.N - 1;
    prof.meta = ProfileMeta{pb.params.N, pb.params.p, pb.r0, pb.lambda, pb.kappa, 0.0};
    return prof;
}

RadialProfile fd_oracle_impl(const RadialProblem& pb, const NumericsConfig& cfg,
                             const Eigen::VectorXd& guess, bool whole_space)
{
    pb.params.validate();
    cfg.validate();
    const RadialGrid g = make_grid(pb, cfg);
    const RadialGrid g2 = refine(g);
    auto nontrivial = [&](const Eigen::VectorXd& u) {
        return u.maxCoeff() > 1e-3 && u.minCoeff() > -1e-8;
    };
    Eigen::VectorXd u;
    bool ok = false;
    if (guess.size() > 0) {
        if (guess.size() != g.size())
            throw Error(ErrorKind::Incompatible, "initial guess does not match the grid");
        u = guess;
        if (!whole_space)
            u[0] = 0.0;
        ok = newton_fd(pb, g, u, whole_space) && nontrivial(u);
        if (!ok)
            throw Error(ErrorKind::OracleFailure,
                        "finite-difference Newton did not reach a positive nontrivial solution");
    } else {
        // Bump search on a coarse grid, then Newton on the working grid.
        NumericsConfig coarse_cfg = cfg;
        coarse_cfg.max_step = cfg.max_step * 8.0;
        coarse_cfg.hole_resolution = std::max(16.0, cfg.hole_resolution / 8.0);
        coarse_cfg.r_max = g.r_max();
        const RadialGrid gc = make_grid(pb, coarse_cfg);
        const double amps[] = {1.2, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
        const double centres[] = {1.5, 2.5, 1.0, 3.5};
        for (double c : centres) {
            for (double a : amps) {
                Eigen::VectorXd uc = bump(pb, gc, a, whole_space ? 0.0 : c);
                if (!(newton_fd(pb, gc, uc, whole_space) && nontrivial(uc)))
                    continue;
                u.resize(g.size());
                for (int i = 0; i < g.size(); ++i)
                    u[i] = linear_interpolate(gc, uc, g.nodes[i]);
                if (newton_fd(pb, g, u, whole_space) && nontrivial(u)) {
                    ok = true;
                    break;
                }
            }
            if (ok)
                break;
        }
        if (!ok)
            throw Error(ErrorKind::OracleFailure, "finite-difference Newton stagnated from every bump");
    }
    Eigen::VectorXd u2(g2.size());
    for (int i = 0; i < g.size(); ++i)
        u2[2 * i] = u[i];
    for (int i = 0; i + 1 < g.size(); ++i)
        u2[2 * i + 1] = 0.5 * (u[i] + u[i + 1]);
    if (!(newton_fd(pb, g2, u2, whole_space) && nontrivial(u2)))
        throw Error(ErrorKind::OracleFailure, "finite-difference Newton failed on the refined grid");
    Eigen::VectorXd ext(g.size());
    for (int i = 0; i < g.size(); ++i)
        ext[i] = (4.0 * u2[2 * i] - u[i]) / 3.0;
    return fd_profile(pb, g, ext);
}

}  // namespace

RadialProfile fd_bvp_oracle(const RadialProblem& problem, const NumericsConfig& cfg,
                            const Eigen::VectorXd& initial_guess)
{
    if (!(problem.r0 > 0.0))
        throw Error(ErrorKind::Domain, "exterior oracle needs a positive inner radius");
    return fd_oracle_impl(problem, cfg, initial_guess, false);
}

RadialProfile fd_bvp_oracle(const ModelParams& params, double R, const NumericsConfig& cfg)
{
    return fd_bvp_oracle(RadialProblem{params, 1.0, 1.0, R}, cfg);
}

RadialProfile fd_whole_space_oracle(const ModelParams& params, const NumericsConfig& cfg)
{
    return fd_oracle_impl(RadialProblem{params, 1.0, 1.0, 0.0}, cfg, Eigen::VectorXd(), true);
}

RadialProfile rescale_to_unit(const ShootingResult& w, double R)
{
    if (!(R > 0.0))
        throw Error(ErrorKind::Domain, "R must be positive");
    const RadialProfile& src = w.profile;
    RadialProfile u;
    u.grid.r0 = src.grid.r0 / R;
    u.grid.nodes = src.grid.nodes / R;
    u.grid.nodes[0] = u.grid.r0;
    u.values = src.values;
    u.derivatives = src.derivatives * R;
    u.decay_exponent = src.decay_exponent * R;
    u.weight_power = src.weight_power;
    u.meta = src.meta;
    u.meta.R = R;
    u.meta.lambda = src.meta.lambda / (R * R);
    u.meta.kappa = src.meta.kappa * R;
    return u;
}

RadialProfile lambda_derivative(const RadialProfile& u)
{
    RadialProfile d = u;
    const double lam = u.meta.lambda;
    for (int i = 0; i < u.size(); ++i) {
        const double r = u.grid.nodes[i];
        const double du = u.derivatives[i];
        const double d2 = r > 0.0 ? -drift(u.meta.N, r, u.meta.kappa) * du
                                        - nonlinearity(u.values[i], u.meta.p) / lam
                                  : 0.0;
        d.values[i] = -du * r / (2.0 * lam);
        d.derivatives[i] = -(d2 * r + du) / (2.0 * lam);
    }
    return d;
}

double weighted_h1_distance_to_whole_space(const RadialProfile& w, const RadialProfile& U)
{
    const int N = U.meta.N;
    const double R = w.grid.r0;
    const double r_end = std::min(w.grid.r_max(), U.grid.r_max());
    auto simpson = [](double a, double b, int n, auto&& f) {
        if (n % 2)
            ++n;
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i)
            s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return s * h / 3.0;
    };
    auto weight = [&](double r) { return r > 0.0 ? std::pow(std::sinh(r), N - 1) : 0.0; };
    const double hq = 0.002;
    const double inner = simpson(0.0, R, std::max(64, static_cast<int>(R / hq)), [&](double r) {
        const double v = U(r), dv = U.derivative(r);
        return weight(r) * (v * v + dv * dv);
    });
    const double outer = simpson(R, r_end, std::max(64, static_cast<int>((r_end - R) / hq)), [&](double r) {
        const double v = w(r) - U(r), dv = w.derivative(r) - U.derivative(r);
        return weight(r) * (v * v + dv * dv);
    });
    return std::sqrt(inner + outer);
}

std::vector<ConvergenceEntry> convergence_study(const ModelParams& params,
                                                const std::vector<double>& radii,
                                                const NumericsConfig& cfg)
{
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0))
            throw Error(ErrorKind::Validation, "radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw Error(ErrorKind::Validation, "radii must be strictly decreasing");
    }
    const RadialProfile U = solve_whole_space_ground_state(params, cfg);
    std::vector<ConvergenceEntry> out;
    for (double R : radii) {
        const ShootingResult w = solve_exterior_ground_state(params, R, cfg);
        out.push_back({R, weighted_h1_distance_to_whole_space(w.profile, U)});
    }
    return out;
}

RadialProfile solve_lambda_form(const ModelParams& params, double lambda, GeometryMode mode,
                                const NumericsConfig& cfg)
{
    if (!(lambda > 0.0))
        throw Error(ErrorKind::Domain, "lambda must be positive");
    if (mode == GeometryMode::Exact) {
        const double R = 1.0 / std::sqrt(lambda);
        RadialProfile u = rescale_to_unit(solve_exterior_ground_state(params, R, cfg), R);
        u.meta.lambda = lambda;
        return u;
    }
    return solve_radial_problem(RadialProblem{params, lambda, 1.0, 1.0}, cfg).profile;
}

std::shared_ptr<const RadialProfile> GroundStateCache::get(double lambda)
{
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(lambda);
        if (it != cache_.end())
            return it->second;
    }
    auto u = std::make_shared<const RadialProfile>(solve_lambda_form(params_, lambda, mode_, cfg_));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(lambda, u);
    return it->second;
}

}  // namespace hypbif
