#include "hypbif/dtn.hpp"

#include "hypbif/tridiag.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace hypbif {

namespace {

double mode_mu(int degree, const ModelParams& params)
{
    if (degree < 0)
        throw Error(ErrorKind::Domain, "mode degree must be nonnegative");
    return sphere_eigenvalue(degree, params.N);
}

double one_sided_sigma(const RadialOperator& op, const Eigen::VectorXd& c)
{
    const double h = op.spacing();
    const double dc = (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * h);
    return -(dc + op.boundary_constant());
}

}  // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

RadialProfile solve_mode_ode(int degree, const RadialProfile& u, const ModelParams& params,
                             const NumericsConfig& cfg)
{
    cfg.validate();
    const double mu = mode_mu(degree, params);
    RadialOperator op(u, params);
    const Eigen::VectorXd coarse = op.solve_mode(mu);
    const Eigen::VectorXd fine = RadialOperator(refine_profile(u), params).solve_mode(mu);
    if (!coarse.allFinite() || !fine.allFinite())
        throw Error(ErrorKind::Degeneracy, "mode equation is singular at this lambda");
    Eigen::VectorXd c(coarse.size());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    return nodal_profile(u, c, op.closure_exponent());
}

double sigma_single_grid(int degree, const RadialProfile& u, const ModelParams& params)
{
    RadialOperator op(u, params);
    const Eigen::VectorXd c = op.solve_mode(mode_mu(degree, params));
    return one_sided_sigma(op, c);
}

double sigma_eigenvalue(int degree, const RadialProfile& u, const ModelParams& params,
                        const NumericsConfig& cfg)
{
    cfg.validate();
    const double coarse = sigma_single_grid(degree, u, params);
    const double fine = sigma_single_grid(degree, refine_profile(u), params);
    return (4.0 * fine - coarse) / 3.0;
}

int dirichlet_count(int degree, const RadialProfile& u, const ModelParams& params)
{
    return RadialOperator(u, params).negative_count(mode_mu(degree, params));
}

namespace {

// P1 Galerkin energy with psi(r0) = 1; returns min Q-tilde / (lambda S^{N-1}(r0)).
double p1_sigma(int degree, const RadialProfile& u, const ModelParams& params, int n_cells)
{
    const double lam = u.meta.lambda, kappa = u.meta.kappa;
    const double a = u.grid.r0, b = u.grid.r_max();
    const double h = (b - a) / n_cells;
    const double mu = mode_mu(degree, params);
    const double gamma = decay_exponent(params, lam, kappa, 0.0);
    const int N = params.N;
    // Scaled by exp(-(N-1) log S(r0)) to keep entries moderate.
    const double lw0 = (N - 1) * log_warp(a, kappa);
    static const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const int n = n_cells + 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off = Eigen::VectorXd::Zero(n - 1);
    for (int e = 0; e < n_cells; ++e) {
        const double r0 = a + e * h;
        double kss = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0;
        for (int q = 0; q < 3; ++q) {
            const double t = 0.5 * (1.0 + gx[q]);
            const double r = r0 + t * h;
            const double w = 0.5 * h * gw[q] * std::exp((N - 1) * log_warp(r, kappa) - lw0);
            const double s = std::exp(log_warp(r, kappa));
            const double ur = std::max(u(r), 0.0);
            const double V = 1.0 - params.p * std::pow(ur, params.p - 1.0) + lam * mu / (s * s);
            kss += w;
            m00 += w * V * (1.0 - t) * (1.0 - t);
            m01 += w * V * (1.0 - t) * t;
            m11 += w * V * t * t;
        }
        const double k = lam * kss / (h * h);
        diag[e] += k + m00;
        diag[e + 1] += k + m11;
        off[e] += -k + m01;
    }
    diag[n - 1] += lam * gamma * std::exp((N - 1) * log_warp(b, kappa) - lw0);
    // Interior system K_II psi_I = -K_I0 with Jacobi scaling.
    Eigen::VectorXd d = diag.tail(n - 1), o = off.tail(n - 2);
    Eigen::VectorXd s = d.cwiseAbs().cwiseSqrt().cwiseInverse();
    Eigen::VectorXd ds = d.cwiseProduct(s).cwiseProduct(s);
    Eigen::VectorXd os(n - 2);
    for (int i = 0; i < n - 2; ++i)
        os[i] = o[i] * s[i] * s[i + 1];
    if (sturm_count<double>(ds, os, 0.0) != 0)
        throw Error(ErrorKind::Precondition,
                    "variational sigma: Dirichlet mode form is not positive (lambda below Lambda_0)");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
    rhs[0] = -off[0] * s[0];
    const Eigen::VectorXd y = solve_tridiagonal<double>(os, ds, os, rhs);
    Eigen::VectorXd psi(n);
    psi[0] = 1.0;
    for (int i = 1; i < n; ++i)
        psi[i] = y[i - 1] * s[i - 1];
    // Certificate: the interior gradient of the energy vanishes.
    const Eigen::VectorXd g = tridiagonal_apply<double>(diag, off, psi);
    double gnorm = 0.0, gscale = 0.0;
    for (int i = 1; i < n; ++i) {
        gnorm = std::max(gnorm, std::abs(g[i]) * s[i - 1]);
        gscale = std::max(gscale, std::abs(psi[i]) / s[i - 1]);
    }
    if (!(gnorm <= 1e-9 * std::max(1.0, gscale)))
        throw Error(ErrorKind::OracleFailure, "variational sigma: gradient certificate failed");
    const double energy = g[0];  // psi^T K psi with interior rows zero
    return energy / lam - drift(N, a, kappa);
}

}  // namespace

double variational_sigma(int degree, const RadialProfile& u, const ModelParams& params,
                         const NumericsConfig& cfg)
{
    cfg.validate();
    params.validate();
    const int cells = u.size() - 1;
    const double coarse = p1_sigma(degree, u, params, cells);
    const double fine = p1_sigma(degree, u, params, 2 * cells);
    return (4.0 * fine - coarse) / 3.0;
}

void BoundaryFunction::validate(const GroupSpectrum& spectrum) const
{
    for (const auto& m : modes) {
        if (m.degree == 0)
            throw Error(ErrorKind::Validation, "boundary function has a degree-0 (mean) component");
        auto it = std::find_if(spectrum.entries.begin(), spectrum.entries.end(),
                               [&](const SpectrumEntry& e) { return e.degree == m.degree; });
        if (it == spectrum.entries.end())
            throw Error(ErrorKind::Validation, "boundary mode degree is not in the group spectrum");
        if (m.coefficients.size() != it->multiplicity)
            throw Error(ErrorKind::Validation, "boundary mode coefficients do not match the multiplicity");
    }
}

const BoundaryMode* BoundaryFunction::find(int degree) const
{
    for (const auto& m : modes)
        if (m.degree == degree)
            return &m;
    return nullptr;
}

namespace {

const InvariantBasis& cached_basis(const SymmetryGroup& group, int degree)
{
    static std::mutex mutex;
    static std::vector<std::pair<std::string, std::unique_ptr<InvariantBasis>>> cache;
    const std::string key = group.name() + "/" + std::to_string(group.ambient_N) + "/"
                            + std::to_string(degree);
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& [k, b] : cache)
        if (k == key)
            return *b;
    cache.emplace_back(key, std::make_unique<InvariantBasis>(group, degree));
    return *cache.back().second;
}

}  // namespace

double BoundaryFunction::evaluate(const Eigen::VectorXd& x) const
{
    double v = 0.0;
    for (const auto& m : modes)
        v += cached_basis(group, m.degree).evaluate(x, m.coefficients);
    return v;
}

double sphere_inner(const BoundaryFunction& a, const BoundaryFunction& b)
{
    int degree = 0;
    for (const auto& m : a.modes)
        degree = std::max(degree, m.degree);
    int db = 0;
    for (const auto& m : b.modes)
        db = std::max(db, m.degree);
    return sphere_integral(a.group.ambient_N, degree + db,
                           [&](const Eigen::VectorXd& x) { return a.evaluate(x) * b.evaluate(x); });
}

double DtNOperator::sigma(int degree)
{
    auto it = sigma_.find(degree);
    if (it == sigma_.end())
        it = sigma_.emplace(degree, sigma_eigenvalue(degree, u_, params_, cfg_)).first;
    return it->second;
}

BoundaryFunction DtNOperator::apply(const BoundaryFunction& v)
{
    BoundaryFunction out = v;
    for (auto& m : out.modes) {
        if (m.degree == 0)
            throw Error(ErrorKind::Validation, "apply_H: degree-0 component");
        m.coefficients *= sigma(m.degree);
    }
    return out;
}

BoundaryFunction apply_H(const BoundaryFunction& v, const RadialProfile& u, const ModelParams& params,
                         const NumericsConfig& cfg)
{
    return DtNOperator(u, params, cfg).apply(v);
}

std::vector<ModeFunction> dirichlet_extension(const BoundaryFunction& v, const RadialProfile& u,
                                              const ModelParams& params, const NumericsConfig& cfg)
{
    std::vector<ModeFunction> out;
    const auto spectrum = radial_spectrum(u, params, 1, cfg);
    const RadialProfile& z = spectrum[0].eigenfunction;
    RadialOperator op(u, params);
    double side_z = 0.0, side_flux = 0.0;
    for (const auto& m : v.modes) {
        if (m.degree == 0)
            throw Error(ErrorKind::Validation, "dirichlet_extension: degree-0 component");
        const RadialProfile c = solve_mode_ode(m.degree, u, params, cfg);
        const double norm = m.coefficients.norm();
        ModeFunction f;
        f.degree = m.degree;
        f.radial = c;
        f.coefficients = m.coefficients;
        if (norm > 0.0) {
            f.radial.values *= norm;
            f.radial.derivatives *= norm;
            f.coefficients /= norm;
        }
        const InvariantBasis& basis = cached_basis(v.group, m.degree);
        const double mean = sphere_integral(params.N, m.degree, [&](const Eigen::VectorXd& x) {
            return basis.evaluate(x, f.coefficients);
        });
        const double radial_z = op.mass_inner(f.radial.values, z.values);
        side_z = std::max(side_z, std::abs(mean * radial_z));
        side_flux = std::max(side_flux, std::abs(mean * f.radial.derivatives[0]));
        out.push_back(std::move(f));
    }
    if (side_z > cfg.quad_tol || side_flux > cfg.quad_tol) {
        std::ostringstream os;
        os << "dirichlet_extension: side conditions violated (z-orthogonality " << side_z
           << ", flux mean " << side_flux << ")";
        throw Error(ErrorKind::Consistency, os.str());
    }
    return out;
}

double evaluate_extension(const std::vector<ModeFunction>& psi, const SymmetryGroup& group, double r,
                          const Eigen::VectorXd& x)
{
    double v = 0.0;
    for (const auto& m : psi)
        v += m.radial(r) * cached_basis(group, m.degree).evaluate(x, m.coefficients);
    return v;
}

std::vector<double> log_spaced(double a, double b, int count)
{
    if (!(a > 0.0) || !(b > a) || count < 2)
        throw Error(ErrorKind::Validation, "log_spaced: need 0 < a < b and two points");
    std::vector<double> out(count);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(la + (lb - la) * i / (count - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

namespace {

SigmaSample sample_sigma(int degree, double lambda, GroundStateCache& cache, const NumericsConfig& cfg)
{
    const auto u = cache.get(lambda);
    SigmaSample s;
    s.lambda = lambda;
    s.dirichlet_count = dirichlet_count(degree, *u, cache.params());
    s.sigma = sigma_eigenvalue(degree, *u, cache.params(), cfg);
    return s;
}

// Multisection on the Dirichlet count between lo (count c_lo) and hi.
double locate_pole(int degree, double lo, double hi, int c_lo, GroundStateCache& cache,
                   const NumericsConfig& cfg, const SigmaCurveOptions& opt)
{
    while (hi / lo - 1.0 > opt.pole_tol) {
        const double mid = std::sqrt(lo * hi);
        const int c = dirichlet_count(degree, solve_lambda_form(cache.params(), mid, cache.mode(), cfg),
                                      cache.params());
        if (c == c_lo)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

SigmaCurve sigma_curve(int degree, const std::vector<double>& lambda_grid, GroundStateCache& cache,
                       const NumericsConfig& cfg, const SigmaCurveOptions& options)
{
    cfg.validate();
    if (lambda_grid.size() < 2)
        throw Error(ErrorKind::Validation, "sigma_curve: grid needs two points");
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > options.lambda0_bound) || !(lambda_grid[i] > 0.0))
            throw Error(ErrorKind::Validation, "sigma_curve: grid point at or below the Lambda_0 bound");
        if (i && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw Error(ErrorKind::Validation, "sigma_curve: grid must be strictly increasing");
    }
    SigmaCurve curve;
    curve.degree = degree;
    curve.samples.resize(lambda_grid.size());
    parallel_for(static_cast<int>(lambda_grid.size()), options.threads, [&](int i) {
        curve.samples[i] = sample_sigma(degree, lambda_grid[i], cache, cfg);
    });

    if (options.resolve_poles) {
        for (int ext = 0; ext < 20 && curve.samples.back().dirichlet_count != 0; ++ext)
            curve.samples.push_back(sample_sigma(degree, curve.samples.back().lambda * 1.25, cache, cfg));
        std::vector<size_t> changes;
        for (size_t i = 0; i + 1 < curve.samples.size(); ++i)
            if (curve.samples[i].dirichlet_count != curve.samples[i + 1].dirichlet_count)
                changes.push_back(i);
        curve.poles.resize(changes.size());
        parallel_for(static_cast<int>(changes.size()), options.threads, [&](int j) {
            const auto& a = curve.samples[changes[j]];
            const auto& b = curve.samples[changes[j] + 1];
            curve.poles[j] = locate_pole(degree, a.lambda, b.lambda, a.dirichlet_count, cache, cfg, options);
        });
        std::vector<double> extra;
        for (size_t j = 0; j < changes.size(); ++j) {
            const double right = curve.samples[changes[j] + 1].lambda;
            for (double f : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
                const double l = curve.poles[j] * (1.0 + f);
                if (l < right * (1.0 - 1e-9))
                    extra.push_back(l);
            }
        }
        std::vector<SigmaSample> added(extra.size());
        parallel_for(static_cast<int>(extra.size()), options.threads, [&](int i) {
            added[i] = sample_sigma(degree, extra[i], cache, cfg);
        });
        curve.samples.insert(curve.samples.end(), added.begin(), added.end());
        std::sort(curve.samples.begin(), curve.samples.end(),
                  [](const SigmaSample& x, const SigmaSample& y) { return x.lambda < y.lambda; });
    }
    for (size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        const auto& a = curve.samples[i];
        const auto& b = curve.samples[i + 1];
        if (a.dirichlet_count == b.dirichlet_count && (a.sigma < 0.0) != (b.sigma < 0.0))
            curve.brackets.push_back({a.lambda, b.lambda, a.sigma, b.sigma});
    }
    return curve;
}

double lambda0_bound(double mu_i1, GroundStateCache& cache, const NumericsConfig& cfg)
{
    if (!(mu_i1 > 0.0))
        throw Error(ErrorKind::Precondition, "lambda0_bound: mu must be positive");
    auto B = [&](double lambda) {
        const RadialProfile u = solve_lambda_form(cache.params(), lambda, cache.mode(), cfg);
        const double tau0 = radial_spectrum(u, cache.params(), 1, cfg)[0].eigenvalue;
        return lambda0_lower_bound(tau0, mu_i1, u.meta.kappa);
    };
    // f(lambda) = lambda - B(lambda) is increasing; bracket and bisect in log lambda.
    double lo = 1.0, hi = 1.0;
    double flo = lo - B(lo);
    if (flo < 0.0) {
        hi = lo;
        do {
            hi *= 2.0;
            if (hi > 1e6)
                throw Error(ErrorKind::NotFound, "lambda0_bound: no fixed point below 1e6");
        } while (hi - B(hi) < 0.0);
        lo = hi / 2.0;
    } else {
        do {
            lo /= 2.0;
            if (lo < 1e-6)
                throw Error(ErrorKind::NotFound, "lambda0_bound: no fixed point above 1e-6");
        } while (lo - B(lo) > 0.0);
        hi = lo * 2.0;
    }
    while (hi / lo - 1.0 > 1e-8) {
        const double mid = std::sqrt(lo * hi);
        if (mid - B(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace hypbif
