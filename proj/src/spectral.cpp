#include "hypbif/spectral.hpp"

#include "hypbif/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypbif {

RadialOperator::RadialOperator(const RadialProfile& u, const ModelParams& params)
    : params_(params), lambda_(u.meta.lambda), kappa_(u.meta.kappa)
{
    params.validate();
    u.validate();
    if (!u.grid.is_uniform())
        throw Error(ErrorKind::Incompatible, "RadialOperator: grid must be uniform");
    if (u.grid.r0 <= 0.0)
        throw Error(ErrorKind::Domain, "RadialOperator: inner radius must be positive");
    const int n = u.size();
    if (n < 4)
        throw Error(ErrorKind::Incompatible, "RadialOperator: grid too small");
    h_ = u.grid.spacing();
    gamma_ = decay_exponent(params, lambda_, kappa_, 0.0);
    r_ = u.grid.nodes;
    lw_.resize(n);
    lwh_.resize(n - 1);
    coef_ = Eigen::VectorXd::Ones(n);
    coef_[0] = coef_[n - 1] = 0.5;
    v0_.resize(n);
    inv_s2_.resize(n);
    for (int i = 0; i < n; ++i) {
        lw_[i] = (params.N - 1) * log_warp(r_[i], kappa_);
        const double s = std::exp(log_warp(r_[i], kappa_));
        inv_s2_[i] = 1.0 / (s * s);
        const double ui = std::max(u.values[i], 0.0);
        v0_[i] = 1.0 - params.p * std::pow(ui, params.p - 1.0);
        if (i + 1 < n)
            lwh_[i] = (params.N - 1) * log_warp(r_[i] + 0.5 * h_, kappa_);
    }
}

void RadialOperator::symmetric_matrix(double mu, Eigen::VectorXd& diag, Eigen::VectorXd& off) const
{
    const int n = size();
    const int m = n - 1;
    diag.resize(m);
    off.resize(m - 1);
    const double h2 = h_ * h_;
    for (int i = 1; i < n; ++i) {
        double d = lambda_ * std::exp(lwh_[i - 1] - lw_[i]);
        if (i + 1 < n)
            d += lambda_ * std::exp(lwh_[i] - lw_[i]);
        d /= h2 * coef_[i];
        if (i + 1 == n)
            d += lambda_ * gamma_ / (h_ * coef_[i]);
        diag[i - 1] = d + v0_[i] + lambda_ * mu * inv_s2_[i];
        if (i + 1 < n)
            off[i - 1] = -lambda_ * std::exp(lwh_[i] - 0.5 * (lw_[i] + lw_[i + 1]))
                         / (h2 * std::sqrt(coef_[i] * coef_[i + 1]));
    }
}

int RadialOperator::negative_count(double mu, double shift) const
{
    Eigen::VectorXd d, o;
    symmetric_matrix(mu, d, o);
    return sturm_count<double>(d, o, shift);
}

double RadialOperator::quadratic_form(const Eigen::VectorXd& psi, double mu) const
{
    const int n = size();
    if (psi.size() != n)
        throw Error(ErrorKind::Incompatible, "quadratic_form: size mismatch");
    double q = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double d = psi[i + 1] - psi[i];
        q += lambda_ * std::exp(lwh_[i]) * d * d / h_;
    }
    for (int i = 0; i < n; ++i)
        q += coef_[i] * h_ * std::exp(lw_[i]) * (v0_[i] + lambda_ * mu * inv_s2_[i]) * psi[i] * psi[i];
    q += lambda_ * gamma_ * std::exp(lw_[n - 1]) * psi[n - 1] * psi[n - 1];
    return q;
}

double RadialOperator::mass_norm2(const Eigen::VectorXd& psi) const
{
    double s = 0.0;
    for (int i = 0; i < size(); ++i)
        s += coef_[i] * h_ * std::exp(lw_[i]) * psi[i] * psi[i];
    return s;
}

double RadialOperator::mass_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const
{
    double s = 0.0;
    for (int i = 0; i < size(); ++i)
        s += coef_[i] * h_ * std::exp(lw_[i]) * a[i] * b[i];
    return s;
}

double RadialOperator::inverse_square_integral(const Eigen::VectorXd& psi) const
{
    double s = 0.0;
    for (int i = 0; i < size(); ++i)
        s += coef_[i] * h_ * std::exp(lw_[i]) * inv_s2_[i] * psi[i] * psi[i];
    return s;
}

double RadialOperator::boundary_weight() const { return std::exp(lw_[0]); }

double RadialOperator::boundary_constant() const
{
    return drift(params_.N, r_[0], kappa_);
}

Eigen::VectorXd RadialOperator::solve_mode(double mu) const
{
    // Flux form in extended precision; neighbouring weight ratios are formed directly.
    using ld = long double;
    const int n = size();
    const int m = n - 1;
    const ld k = kappa_, h = h_, lam = lambda_;
    const ld ch = std::cosh(k * h / 2), sh = std::sinh(k * h / 2);
    auto step_ratio = [&](ld r) {  // S(r + h/2) / S(r)
        return ch + sh / std::tanh(k * r);
    };
    Vec<ld> up(n), down(n);  // W(r_i + h/2) / W(r_i), W(r_i + h/2) / W(r_{i+1})
    for (int i = 0; i + 1 < n; ++i) {
        const ld r = ld(r_[0]) + ld(i) * h;
        up[i] = std::pow(step_ratio(r), ld(params_.N - 1));
        down[i] = std::pow(step_ratio(r + h / 2), -ld(params_.N - 1));
    }
    Vec<ld> diag(m), sub(m - 1), sup(m - 1), rhs = Vec<ld>::Zero(m);
    const ld h2 = h * h;
    for (int i = 1; i < n; ++i) {
        const ld ci = coef_[i];
        ld d = down[i - 1];
        if (i + 1 < n)
            d += up[i];
        d = lam * d / (h2 * ci);
        if (i + 1 == n)
            d += lam * ld(gamma_) / (h * ci);
        diag[i - 1] = d + ld(v0_[i]) + lam * ld(mu) * ld(inv_s2_[i]);
        if (i + 1 < n)
            sup[i - 1] = -lam * up[i] / (h2 * ci);
        if (i > 1)
            sub[i - 2] = -lam * down[i - 1] / (h2 * ci);
    }
    rhs[0] = lam * down[0] / (h2 * ld(coef_[1]));
    const Vec<ld> y = solve_tridiagonal<ld>(sub, diag, sup, rhs);
    Eigen::VectorXd c(n);
    c[0] = 1.0;
    for (int i = 1; i < n; ++i)
        c[i] = double(y[i - 1]);
    return c;
}

void RadialOperator::eigenpairs(double mu, int count, Eigen::VectorXd& values,
                                Eigen::MatrixXd& vectors) const
{
    const int n = size();
    Eigen::VectorXd d, o;
    symmetric_matrix(mu, d, o);
    values = tridiagonal_eigenvalues<double>(d, o, count);
    vectors.resize(n, count);
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd y = twisted_eigenvector<double>(d, o, values[k]);
        vectors(0, k) = 0.0;
        for (int i = 1; i < n; ++i)
            vectors(i, k) = y[i - 1] / std::sqrt(coef_[i] * h_ * std::exp(lw_[i]));
    }
}

RadialProfile nodal_profile(const RadialProfile& u, const Eigen::VectorXd& values, double decay)
{
    const int n = u.size();
    const double h = u.grid.spacing();
    RadialProfile out;
    out.grid = u.grid;
    out.values = values;
    out.derivatives.resize(n);
    for (int i = 1; i + 1 < n; ++i)
        out.derivatives[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    out.derivatives[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    out.derivatives[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    out.decay_exponent = decay;
    out.weight_power = u.weight_power;
    out.meta = u.meta;
    out.meta.residual = 0.0;
    return out;
}

RadialProfile refine_profile(const RadialProfile& u)
{
    const int n = u.size();
    RadialProfile out;
    out.grid = RadialGrid::uniform(u.grid.r0, u.grid.r_max(), 2 * n - 1);
    out.values.resize(2 * n - 1);
    out.derivatives.resize(2 * n - 1);
    for (int i = 0; i < 2 * n - 1; ++i) {
        const double r = out.grid.nodes[i];
        if (i % 2 == 0) {
            out.values[i] = u.values[i / 2];
            out.derivatives[i] = u.derivatives[i / 2];
        } else {
            out.values[i] = u(r);
            out.derivatives[i] = u.derivative(r);
        }
    }
    out.decay_exponent = u.decay_exponent;
    out.weight_power = u.weight_power;
    out.meta = u.meta;
    return out;
}

std::vector<EigenPair> radial_spectrum(const RadialProfile& u, const ModelParams& params, int n_eigs,
                                       const NumericsConfig& cfg)
{
    cfg.validate();
    if (n_eigs < 1)
        throw Error(ErrorKind::Precondition, "radial_spectrum: n_eigs must be positive");
    RadialOperator op(u, params);
    const int negative = op.negative_count(0.0);
    std::ostringstream os;
    if (negative != 1) {
        os << "radial Morse index is " << negative << ", expected 1";
        throw Error(ErrorKind::LemmaViolation, os.str());
    }
    if (op.negative_count(0.0, 1e-8) != op.negative_count(0.0, -1e-8))
        throw Error(ErrorKind::LemmaViolation, "radial spectrum has an eigenvalue within 1e-8 of 0");

    Eigen::VectorXd ev;
    Eigen::MatrixXd vec;
    op.eigenpairs(0.0, n_eigs, ev, vec);
    std::vector<EigenPair> out;
    for (int k = 0; k < n_eigs; ++k) {
        Eigen::VectorXd z = vec.col(k);
        z /= std::sqrt(op.mass_norm2(z));
        if (z.sum() < 0.0)
            z = -z;
        if (k == 0) {
            for (int i = 1; i < z.size(); ++i)
                if (!(z[i] > 0.0))
                    throw Error(ErrorKind::LemmaViolation, "ground eigenfunction is not positive");
        }
        const double decay = ev[k] < 1.0 ? decay_exponent(params, op.lambda(), op.kappa(), ev[k]) : 0.0;
        out.push_back({ev[k], nodal_profile(u, z, decay)});
    }
    return out;
}

namespace {

void check_same_grid(const RadialProfile& psi, const RadialProfile& u)
{
    if (psi.size() != u.size() || std::abs(psi.grid.r0 - u.grid.r0) > 1e-14 * std::max(1.0, u.grid.r0)
        || std::abs(psi.grid.r_max() - u.grid.r_max()) > 1e-12 * u.grid.r_max())
        throw Error(ErrorKind::Incompatible, "mode function and ground state use different grids");
}

}  // namespace

double quadratic_form_Q(const ModeFunction& psi, const RadialProfile& u, const ModelParams& params)
{
    check_same_grid(psi.radial, u);
    const double scale = std::max(1.0, psi.radial.values.cwiseAbs().maxCoeff());
    if (std::abs(psi.radial.values[0]) > 1e-14 * scale)
        throw Error(ErrorKind::Precondition, "quadratic_form_Q: trace at the inner sphere is not zero");
    RadialOperator op(u, params);
    const double mu = sphere_eigenvalue(psi.degree, params.N);
    return op.quadratic_form(psi.radial.values, mu) * psi.coefficient_norm2();
}

double quadratic_form_Qtilde(const ModeFunction& psi, const RadialProfile& u, const ModelParams& params)
{
    check_same_grid(psi.radial, u);
    RadialOperator op(u, params);
    const double mu = sphere_eigenvalue(psi.degree, params.N);
    const double t = psi.radial.values[0];
    const double q = op.quadratic_form(psi.radial.values, mu)
                     - op.lambda() * op.boundary_constant() * op.boundary_weight() * t * t;
    return q * psi.coefficient_norm2();
}

double inverse_square_integral(const RadialProfile& psi, const RadialProfile& u, const ModelParams& params)
{
    check_same_grid(psi, u);
    return RadialOperator(u, params).inverse_square_integral(psi.values);
}

double lambda0_lower_bound(double tau0, double mu_i1)
{
    return lambda0_lower_bound(tau0, mu_i1, 1.0);
}

double lambda0_lower_bound(double tau0, double mu_i1, double kappa)
{
    if (!(tau0 < 0.0) || !(mu_i1 > 0.0) || !(kappa > 0.0))
        throw Error(ErrorKind::Precondition, "lambda0_lower_bound: need tau0 < 0 and mu > 0");
    const double s = std::sinh(kappa) / kappa;
    return -tau0 * s * s / mu_i1;
}

namespace {

// Composite Simpson on a uniform grid (3/8 rule for an odd interval count).
double simpson(const Eigen::VectorXd& f, double h)
{
    const int n = static_cast<int>(f.size());
    if (n < 2)
        return 0.0;
    if (n == 2)
        return 0.5 * h * (f[0] + f[1]);
    int m = n - 1;
    double s = 0.0;
    int end = m;
    if (m % 2 == 1) {
        if (m == 1)
            return 0.5 * h * (f[0] + f[1]);
        end = m - 3;
        s += 3.0 * h / 8.0 * (f[end] + 3.0 * f[end + 1] + 3.0 * f[end + 2] + f[end + 3]);
    }
    for (int i = 0; i + 2 <= end; i += 2)
        s += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    return s;
}

void require_uniform(const RadialProfile& g)
{
    g.validate();
    if (!g.grid.is_uniform())
        throw Error(ErrorKind::Incompatible, "test profile grid must be uniform");
}

}  // namespace

InequalitySides weighted_boundary_inequality_check(const RadialProfile& g, int N, double lambda_w, double r,
                                                   double quad_tol)
{
    if (!(lambda_w > 0.0))
        throw Error(ErrorKind::Precondition, "weighted inequality: lambda_w must be positive");
    require_uniform(g);
    if (std::abs(g.grid.r0 - r) > 1e-12 * std::max(1.0, r))
        throw Error(ErrorKind::Incompatible, "weighted inequality: profile must start at r");
    const int n = g.size();
    Eigen::VectorXd a(n), b(n);
    for (int i = 0; i < n; ++i) {
        const double s = std::sinh(g.grid.nodes[i]);
        a[i] = g.derivatives[i] * g.derivatives[i] * std::pow(s, N - 1);
        b[i] = g.values[i] * g.values[i] * std::pow(s, N - 3);
    }
    const double h = g.grid.spacing();
    InequalitySides out;
    out.lhs = std::pow(std::sinh(r), N - 2) * g.values[0] * g.values[0];
    out.rhs = simpson(a, h) / lambda_w + (2.0 - N + lambda_w) * simpson(b, h);
    if (out.lhs > out.rhs + quad_tol * std::max(1.0, out.rhs)) {
        std::ostringstream os;
        os << "weighted boundary inequality fails: lhs " << out.lhs << " > rhs " << out.rhs;
        throw Error(ErrorKind::LemmaViolation, os.str());
    }
    return out;
}

InequalitySides trace_inequality_check(const std::vector<ModeFunction>& psi, int N, double R,
                                       double quad_tol)
{
    const double threshold = 4.0 / 9.0 * (N + 2) * (N - 1);
    InequalitySides out{0.0, 0.0};
    const double sR = std::sinh(R);
    for (const auto& mode : psi) {
        const double mu = sphere_eigenvalue(mode.degree, N);
        if (mu < threshold) {
            std::ostringstream os;
            os << "trace inequality: degree " << mode.degree << " has mu = " << mu << " below "
               << threshold;
            throw Error(ErrorKind::Precondition, os.str());
        }
        const RadialProfile& g = mode.radial;
        require_uniform(g);
        if (std::abs(g.grid.r0 - R) > 1e-12 * std::max(1.0, R))
            throw Error(ErrorKind::Incompatible, "trace inequality: profile must start at R");
        const int n = g.size();
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) {
            const double s = std::sinh(g.grid.nodes[i]);
            f[i] = std::pow(s, N - 1) * g.derivatives[i] * g.derivatives[i]
                   + mu * std::pow(s, N - 3) * g.values[i] * g.values[i];
        }
        const double w = mode.coefficient_norm2();
        out.lhs += w * std::pow(sR, N - 2) * g.values[0] * g.values[0];
        out.rhs += w * 3.0 / (4.0 * (N - 1)) * simpson(f, g.grid.spacing());
    }
    if (out.lhs > out.rhs + quad_tol * std::max(1.0, out.rhs)) {
        std::ostringstream os;
        os << "trace inequality fails: lhs " << out.lhs << " > rhs " << out.rhs;
        throw Error(ErrorKind::LemmaViolation, os.str());
    }
    return out;
}

RadialProfile random_bump(std::mt19937_64& rng, int N, double a, double length, int nodes)
{
    if (!(a > 0.0) || !(length > 0.0) || nodes < 5)
        throw Error(ErrorKind::Domain, "random_bump: invalid support");
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> amp(0.2, 2.0);
    const double A = amp(rng) * (coef(rng) < 0 ? -1.0 : 1.0);
    const double c1 = 2.0 * coef(rng), c2 = 2.0 * coef(rng), c3 = 2.0 * coef(rng);
    RadialProfile g;
    g.grid = RadialGrid::uniform(a, a + length, nodes);
    g.values.resize(nodes);
    g.derivatives.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double t = (g.grid.nodes[i] - a) / length;
        if (t >= 1.0) {
            g.values[i] = g.derivatives[i] = 0.0;
            continue;
        }
        const double q = 1.0 - t * t;
        const double e = std::exp(1.0 - 1.0 / q);
        const double de = e * (-2.0 * t / (q * q));
        const double poly = 1.0 + c1 * t + c2 * t * t + c3 * t * t * t;
        const double dpoly = c1 + 2.0 * c2 * t + 3.0 * c3 * t * t;
        g.values[i] = A * poly * e;
        g.derivatives[i] = A * (dpoly * e + poly * de) / length;
    }
    g.weight_power = N - 1;
    g.meta.N = N;
    return g;
}

double proof_constant()
{
    const double e2 = std::exp(2.0);
    return 3.0 * (e2 + 1.0) / (4.0 * (e2 - 1.0));
}

}  // namespace hypbif
