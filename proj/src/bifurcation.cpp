#include "hypbif/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypbif {

namespace {

double sigma_at(int degree, double lambda, GroundStateCache& cache, const NumericsConfig& cfg)
{
    const RadialProfile u = solve_lambda_form(cache.params(), lambda, cache.mode(), cfg);
    return sigma_eigenvalue(degree, u, cache.params(), cfg);
}

}  // namespace

BifurcationPoint find_lambda_star(const SigmaCurve& curve, GroundStateCache& cache, const NumericsConfig& cfg,
                                  int multiplicity, double sigma_tol)
{
    BifurcationPoint pt;
    pt.degree = curve.degree;
    pt.kernel_multiplicity = multiplicity;
    for (const auto& b : curve.brackets)
        if (b.sigma_left < 0.0 && b.sigma_right > 0.0)
            pt.candidates.push_back(b);
    if (pt.candidates.empty()) {
        std::ostringstream os;
        os << "no sign change of sigma_" << curve.degree << " from negative to positive on the sampled curve ("
           << curve.samples.size() << " samples)";
        throw Error(ErrorKind::NotFound, os.str());
    }
    const SigmaBracket br = pt.candidates.back();
    // Illinois regula falsi with a bisection safeguard.
    double a = br.lambda_left, b = br.lambda_right, fa = br.sigma_left, fb = br.sigma_right;
    int side = 0;
    double x = a, fx = fa;
    for (int it = 0; it < 100; ++it) {
        pt.iterations = it + 1;
        x = (a * fb - b * fa) / (fb - fa);
        if (!(x > a && x < b) || (it % 4 == 3))
            x = 0.5 * (a + b);
        fx = sigma_at(curve.degree, x, cache, cfg);
        if (std::abs(fx) < sigma_tol)
            break;
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
            if (side == -1)
                fb *= 0.5;
            side = -1;
        } else {
            b = x;
            fb = fx;
            if (side == 1)
                fa *= 0.5;
            side = 1;
        }
        if (b - a < 1e-15 * b)
            break;
    }
    if (!(std::abs(fx) < sigma_tol))
        throw Error(ErrorKind::Convergence, "lambda* refinement did not reach the sigma tolerance");
    pt.lambda_star = x;
    pt.sigma_star = fx;
    pt.radius_star = 1.0 / std::sqrt(x);

    double delta = 1e-3 * x;
    for (double pole : curve.poles)
        if (pole < x && x - pole < 2.0 * delta)
            delta = 0.5 * (x - pole);
    pt.delta = delta;
    pt.sign_left = sigma_at(curve.degree, x - delta, cache, cfg);
    pt.sign_right = sigma_at(curve.degree, x + delta, cache, cfg);
    pt.half_left = sigma_at(curve.degree, x - 0.5 * delta, cache, cfg);
    pt.half_right = sigma_at(curve.degree, x + 0.5 * delta, cache, cfg);
    return pt;
}

double bifurcation_radius(const BifurcationPoint& point)
{
    if (!(point.lambda_star > 0.0))
        throw Error(ErrorKind::Domain, "bifurcation_radius: lambda* must be positive");
    return 1.0 / std::sqrt(point.lambda_star);
}

BoundaryShape emit_perturbed_domain(const BifurcationPoint& point, double epsilon, const SymmetryGroup& group,
                                    int n_samples, unsigned seed)
{
    if (!(std::abs(epsilon) < 0.5))
        throw Error(ErrorKind::Domain, "emit_perturbed_domain: |epsilon| must be below 0.5");
    if (n_samples < 1)
        throw Error(ErrorKind::Domain, "emit_perturbed_domain: need at least one sample");
    group.validate();
    const InvariantBasis basis(group, point.degree);
    if (basis.dimension() == 0)
        throw Error(ErrorKind::Validation, "emit_perturbed_domain: degree not in the group spectrum");
    const int N = group.ambient_N;
    BoundaryShape shape;
    shape.base_radius = bifurcation_radius(point);
    shape.epsilon = epsilon;
    shape.degree = point.degree;
    shape.coefficients = Eigen::VectorXd::Zero(basis.dimension());
    shape.coefficients[0] = 1.0;
    auto zeta = [&](const Eigen::VectorXd& x) { return basis.evaluate(x, shape.coefficients); };
    const auto pts = sphere_points(N, n_samples, seed);
    const auto& elems = group_elements(group);
    const size_t stride = std::max<size_t>(1, elems.size() / 120);
    for (const Eigen::VectorXd& x : pts) {
        const double z = zeta(x);
        const double r = shape.base_radius * (1.0 + epsilon * z);
        if (!(r > 0.0))
            throw Error(ErrorKind::Domain, "emit_perturbed_domain: nonpositive radius");
        shape.points.push_back(x);
        shape.radii.push_back(r);
        for (size_t g = 0; g < elems.size(); g += stride)
            shape.invariance_defect
                = std::max(shape.invariance_defect, std::abs(zeta(elems[g].matrix * x) - z));
    }
    shape.mean_perturbation = epsilon * sphere_integral(N, point.degree, zeta) / sphere_area(N);
    if (shape.invariance_defect > 1e-10)
        throw Error(ErrorKind::Consistency, "emitted shape is not invariant under the group");
    if (std::abs(shape.mean_perturbation) > 1e-10)
        throw Error(ErrorKind::Consistency, "emitted perturbation does not have zero mean");
    return shape;
}

CertificateReport certify_group(const GroupSpectrum& spectrum)
{
    CertificateReport rep;
    const G1Report g1 = check_g1(spectrum);
    rep.g1 = g1.satisfied;
    rep.multiplicity_odd = g1.multiplicity_odd;
    if (!rep.g1)
        rep.failed_stage = g1.degree_strict ? "multiplicity" : "G1";
    return rep;
}

CertificateReport certify_local_bifurcation(const BifurcationPoint& point, const GroupSpectrum& spectrum,
                                            GroundStateCache& cache, const NumericsConfig& cfg,
                                            int higher_modes)
{
    CertificateReport rep = certify_group(spectrum);
    rep.crossing = point.sign_left < 0.0 && point.sign_right > 0.0;
    rep.crossing_stable = rep.crossing && point.half_left < 0.0 && point.half_right > 0.0;
    rep.higher_modes_positive = true;
    int checked = 0;
    const RadialProfile u = solve_lambda_form(cache.params(), point.lambda_star, cache.mode(), cfg);
    for (const auto& e : spectrum.entries) {
        if (e.degree <= point.degree)
            continue;
        if (checked++ >= higher_modes)
            break;
        const double s = sigma_eigenvalue(e.degree, u, cache.params(), cfg);
        rep.higher_sigma.emplace_back(e.degree, s);
        if (!(s > 0.0))
            rep.higher_modes_positive = false;
    }
    if (rep.failed_stage.empty()) {
        if (!rep.crossing_stable)
            rep.failed_stage = "crossing";
        else if (!rep.higher_modes_positive)
            rep.failed_stage = "higher-modes";
    }
    rep.passed = rep.failed_stage.empty();
    return rep;
}

}  // namespace hypbif
