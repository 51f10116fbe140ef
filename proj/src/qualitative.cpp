#include "hypbif/qualitative.hpp"

#include "hypbif/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace hypbif {

const char* to_string(SignKind k)
{
    return k == SignKind::AlwaysNegative ? "ALWAYS_NEGATIVE" : "ONE_SIGN_CHANGE";
}

namespace {

struct Exponents {
    double alpha;
    double beta;
};

Exponents exponents(const ModelParams& p)
{
    const double a = 2.0 * (p.N - 1) / (p.p + 3.0);
    return {a, a * (p.p - 1.0)};
}

double factor_at(const ModelParams& params, double coth2)
{
    const auto [a, b] = exponents(params);
    const int N = params.N;
    return 2.0 * a * (a + 1.0 - N) - b - a * (b - 2.0) + a * (b - 2.0) * (a + 2.0 - N) * coth2;
}

}  // namespace

double g_prime_factor(const ModelParams& params, double r)
{
    if (!(r > 0.0))
        throw Error(ErrorKind::Domain, "g_prime_factor: r must be positive");
    const double c = 1.0 / std::tanh(r);
    return factor_at(params, c * c);
}

SignPattern analyze_G_sign(const ModelParams& params, double R, int r_samples, double r_end)
{
    params.validate();
    if (!(R > 0.0))
        throw Error(ErrorKind::Domain, "analyze_G_sign: R must be positive");
    if (r_samples < 2)
        throw Error(ErrorKind::Domain, "analyze_G_sign: need at least two samples");
    if (!(r_end > R))
        r_end = R + 40.0;
    const auto [a, b] = exponents(params);
    std::vector<double> r(r_samples), F(r_samples);
    const double lr = std::log(R), le = std::log(r_end);
    double fmax = 0.0;
    for (int i = 0; i < r_samples; ++i) {
        r[i] = std::exp(lr + (le - lr) * i / (r_samples - 1));
        F[i] = g_prime_factor(params, r[i]);
        fmax = std::max(fmax, std::abs(F[i]));
    }
    SignPattern out;
    out.alpha = a;
    out.beta = b;
    out.samples = r_samples;
    out.f_first = F[0];
    out.f_limit = factor_at(params, 1.0);
    if (params.N >= 3) {
        const double k = a * (b - 2.0) * (a + 2.0 - params.N);
        const double eps = std::numeric_limits<double>::epsilon();
        for (int i = 0; i + 1 < r_samples; ++i) {
            const double c0 = 1.0 / std::tanh(r[i]), c1 = 1.0 / std::tanh(r[i + 1]);
            const double drop = k * (c0 * c0 - c1 * c1);
            const double ulp = 8.0 * eps * std::max(1.0, std::abs(F[i]));
            // Strict decrease wherever the drop is resolvable in floating point.
            if (!(k > 0.0) || F[i + 1] > F[i] + ulp || (drop > ulp && !(F[i + 1] < F[i])))
                throw Error(ErrorKind::LemmaViolation, "F is not strictly decreasing");
        }
    }
    if (!(out.f_limit < 0.0))
        throw Error(ErrorKind::LemmaViolation, "liminf G' is not negative");
    const double tol = 1e-12 * fmax;
    std::vector<int> sign;
    std::vector<int> index;
    for (int i = 0; i < r_samples; ++i) {
        if (std::abs(F[i]) <= tol)
            continue;
        const int s = F[i] > 0.0 ? 1 : -1;
        if (sign.empty() || sign.back() != s) {
            sign.push_back(s);
            index.push_back(i);
        }
    }
    if (sign.size() == 1 && sign[0] < 0) {
        out.kind = SignKind::AlwaysNegative;
        return out;
    }
    if (sign.size() == 2 && sign[0] > 0 && sign[1] < 0) {
        out.kind = SignKind::OneSignChange;
        double lo = r[index[1] - 1], hi = r[index[1]];
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g_prime_factor(params, mid) > 0.0 ? lo : hi) = mid;
        }
        out.change_point = 0.5 * (lo + hi);
        return out;
    }
    std::ostringstream os;
    os << "G' has " << sign.size() << " sign segments starting with " << (sign.empty() ? 0 : sign[0]);
    throw Error(ErrorKind::LemmaViolation, os.str());
}

double estimate_decay_rate(const RadialProfile& profile, double r_a, double r_b)
{
    profile.validate();
    if (!(r_b > r_a))
        throw Error(ErrorKind::Domain, "estimate_decay_rate: empty window");
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < profile.size(); ++i) {
        const double r = profile.grid.nodes[i];
        if (r < r_a || r > r_b)
            continue;
        if (!(profile.values[i] > 0.0))
            throw Error(ErrorKind::Domain, "estimate_decay_rate: profile vanishes inside the window");
        sum += -profile.derivatives[i] / profile.values[i];
        ++count;
    }
    if (count == 0)
        throw Error(ErrorKind::Domain, "estimate_decay_rate: window contains no nodes");
    return sum / count;
}

double estimate_decay_rate(const RadialProfile& profile)
{
    const double r = profile.grid.r_max();
    return estimate_decay_rate(profile, r - 10.0, r - 2.0);
}

double decay_ratio_sup(const RadialProfile& profile)
{
    double s = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < profile.size(); ++i)
        if (profile.values[i] > 0.0)
            s = std::max(s, -profile.derivatives[i] / profile.values[i]);
    return s;
}

double decay_ratio_bound(int N)
{
    return N + std::sqrt(2.0 + (N - 1.0) * (N - 1.0));
}

RadialProfile energy_profile(const RadialProfile& profile, const ModelParams& params, double quad_tol)
{
    params.validate();
    profile.validate();
    const double lam = profile.meta.lambda;
    const double p = params.p;
    RadialProfile E = profile;
    double scale = 1.0;
    for (int i = 0; i < profile.size(); ++i) {
        const double w = std::max(profile.values[i], 0.0);
        const double dw = profile.derivatives[i];
        E.values[i] = 0.5 * lam * dw * dw + std::pow(w, p + 1.0) / (p + 1.0) - 0.5 * w * w;
        const double r = profile.grid.nodes[i];
        E.derivatives[i] = r > 0.0 ? -lam * drift(params.N, r, profile.meta.kappa) * dw * dw : 0.0;
        scale = std::max(scale, std::abs(E.values[i]));
    }
    const double mono_tol = 1e-10 * scale;
    for (int i = 0; i + 1 < E.size(); ++i)
        if (E.values[i + 1] > E.values[i] + mono_tol) {
            std::ostringstream os;
            os << "energy increases at r = " << E.grid.nodes[i] << " by " << E.values[i + 1] - E.values[i];
            throw Error(ErrorKind::LemmaViolation, os.str());
        }
    if (E.values[E.size() - 1] < -quad_tol)
        throw Error(ErrorKind::LemmaViolation, "energy at r_max is negative");
    E.decay_exponent = 2.0 * profile.decay_exponent;
    return E;
}

ShapeReport profile_shape_check(const RadialProfile& profile, const ModelParams& params)
{
    params.validate();
    profile.validate();
    int changes = 0;
    int last = 0;
    int i_change = -1;
    for (int i = 0; i < profile.size(); ++i) {
        const double d = profile.derivatives[i];
        const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (s == 0)
            continue;
        if (last != 0 && s != last) {
            ++changes;
            i_change = i;
        }
        last = s;
    }
    if (changes != 1 || profile.derivatives[0] < 0.0) {
        std::ostringstream os;
        os << "profile has " << changes << " critical points, expected exactly one maximum";
        throw Error(ErrorKind::LemmaViolation, os.str());
    }
    // Zero of the cubic Hermite derivative between the bracketing nodes.
    double lo = profile.grid.nodes[i_change - 1], hi = profile.grid.nodes[i_change];
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (profile.derivative(mid) > 0.0 ? lo : hi) = mid;
    }
    ShapeReport rep;
    rep.r_peak = 0.5 * (lo + hi);
    rep.peak = std::max({profile(rep.r_peak), profile.values[i_change - 1], profile.values[i_change]});
    rep.critical_points = changes;
    if (rep.peak < peak_lower_bound(params.p))
        throw Error(ErrorKind::LemmaViolation, "peak below ((p+1)/2)^{1/(p-1)}");
    return rep;
}

}  // namespace hypbif
