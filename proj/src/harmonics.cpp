#include "hypbif/harmonics.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

namespace hypbif {

namespace {

constexpr double kPi = std::numbers::pi;

using Quat = Eigen::Vector4d;  // (w, x, y, z)

Quat qmul(const Quat& a, const Quat& b)
{
    return Quat(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

Quat qconj(const Quat& a)
{
    return Quat(a[0], -a[1], -a[2], -a[3]);
}

bool canonical_sign(const Quat& q)
{
    for (int i = 0; i < 4; ++i) {
        if (std::abs(q[i]) > 1e-12)
            return q[i] > 0.0;
    }
    return true;
}

std::vector<Quat> signed_units()
{
    std::vector<Quat> out;
    for (int i = 0; i < 4; ++i)
        for (double s : {1.0, -1.0}) {
            Quat q = Quat::Zero();
            q[i] = s;
            out.push_back(q);
        }
    return out;
}

std::vector<Quat> binary_tetrahedral()
{
    std::vector<Quat> out = signed_units();
    for (int m = 0; m < 16; ++m)
        out.push_back(Quat(m & 1 ? -0.5 : 0.5, m & 2 ? -0.5 : 0.5, m & 4 ? -0.5 : 0.5, m & 8 ? -0.5 : 0.5));
    return out;
}

std::vector<Quat> binary_octahedral()
{
    std::vector<Quat> out = binary_tetrahedral();
    const double c = std::sqrt(0.5);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            for (double sa : {c, -c})
                for (double sb : {c, -c}) {
                    Quat q = Quat::Zero();
                    q[a] = sa;
                    q[b] = sb;
                    out.push_back(q);
                }
    return out;
}

std::vector<Quat> binary_icosahedral()
{
    std::vector<Quat> out = binary_tetrahedral();
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const std::array<double, 4> base{0.0, 0.5, phi / 2.0, 0.5 / phi};
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (perm[i] > perm[j])
                    ++inversions;
        if (inversions % 2)
            continue;
        for (int m = 0; m < 8; ++m) {
            Quat q;
            q[perm[0]] = base[0];
            q[perm[1]] = m & 1 ? -base[1] : base[1];
            q[perm[2]] = m & 2 ? -base[2] : base[2];
            q[perm[3]] = m & 4 ? -base[3] : base[3];
            out.push_back(q);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Eigen::MatrixXd rotation3(const Quat& q)
{
    Eigen::Quaterniond e(q[0], q[1], q[2], q[3]);
    return e.toRotationMatrix();
}

std::vector<Eigen::MatrixXd> rotations_from(const std::vector<Quat>& binary)
{
    std::vector<Eigen::MatrixXd> out;
    for (const Quat& q : binary)
        if (canonical_sign(q))
            out.push_back(rotation3(q));
    return out;
}

bool contains(const std::vector<Eigen::MatrixXd>& set, const Eigen::MatrixXd& m)
{
    for (const auto& s : set)
        if ((s - m).cwiseAbs().maxCoeff() < 1e-9)
            return true;
    return false;
}

std::vector<GroupElement> wrap(const std::vector<Eigen::MatrixXd>& mats)
{
    std::vector<GroupElement> out;
    for (const auto& m : mats)
        out.push_back(GroupElement{m, 0.0, 0.0});
    return out;
}

std::vector<GroupElement> build(const SymmetryGroup& g)
{
    const int N = g.ambient_N;
    switch (g.kind) {
    case GroupKind::Full:
        return {GroupElement{Eigen::MatrixXd::Identity(N, N), 0.0, 0.0}};
    case GroupKind::Dihedral: {
        std::vector<Eigen::MatrixXd> mats;
        const int m = g.dihedral_order;
        for (int j = 0; j < m; ++j) {
            const double a = 2.0 * kPi * j / m;
            Eigen::Matrix2d r;
            r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
            mats.push_back(r);
        }
        if (!g.rotations_only)
            for (int j = 0; j < m; ++j) {
                const double a = 2.0 * kPi * j / m;
                Eigen::Matrix2d s;
                s << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
                mats.push_back(s);
            }
        return wrap(mats);
    }
    case GroupKind::Tetrahedral: {
        auto T = rotations_from(binary_tetrahedral());
        if (g.rotations_only)
            return wrap(T);
        auto O = rotations_from(binary_octahedral());
        auto out = T;
        for (const auto& r : O)
            if (!contains(T, r))
                out.push_back(-r);
        return wrap(out);
    }
    case GroupKind::Octahedral:
    case GroupKind::Icosahedral: {
        auto R = rotations_from(g.kind == GroupKind::Octahedral ? binary_octahedral() : binary_icosahedral());
        if (g.rotations_only)
            return wrap(R);
        auto out = R;
        for (const auto& r : R)
            out.push_back(-r);
        return wrap(out);
    }
    case GroupKind::HyperIcosahedral: {
        const auto I = binary_icosahedral();
        std::vector<GroupElement> out;
        for (const Quat& l : I) {
            if (!canonical_sign(l))
                continue;
            for (const Quat& r : I) {
                Eigen::Matrix4d m;
                for (int c = 0; c < 4; ++c) {
                    Quat e = Quat::Zero();
                    e[c] = 1.0;
                    m.col(c) = qmul(qmul(l, e), qconj(r));
                }
                out.push_back(GroupElement{m, std::acos(std::clamp(l[0], -1.0, 1.0)),
                                           std::acos(std::clamp(r[0], -1.0, 1.0))});
            }
        }
        return out;
    }
    }
    throw Error(ErrorKind::Configuration, "unknown group kind");
}

double chebyshev_u_ratio(int k, double alpha)
{
    const double s = std::sin(alpha);
    if (std::abs(s) < 1e-9) {
        const double c = std::cos(alpha);
        return c > 0 ? (k + 1.0) : ((k % 2) ? -(k + 1.0) : (k + 1.0));
    }
    return std::sin((k + 1) * alpha) / s;
}

}  // namespace

void SymmetryGroup::validate() const
{
    switch (kind) {
    case GroupKind::Dihedral:
        if (ambient_N != 2)
            throw Error(ErrorKind::Configuration, "dihedral groups act only for N = 2");
        if (dihedral_order < 1)
            throw Error(ErrorKind::Configuration, "dihedral order must be positive");
        break;
    case GroupKind::Tetrahedral:
    case GroupKind::Octahedral:
    case GroupKind::Icosahedral:
        if (ambient_N != 3)
            throw Error(ErrorKind::Configuration, "polyhedral groups act only for N = 3");
        break;
    case GroupKind::HyperIcosahedral:
        if (ambient_N != 4)
            throw Error(ErrorKind::Configuration, "the hyper-icosahedral group acts only for N = 4");
        break;
    case GroupKind::Full:
        if (ambient_N < 2)
            throw Error(ErrorKind::Configuration, "N must be at least 2");
        break;
    }
}

std::string SymmetryGroup::name() const
{
    std::string s;
    switch (kind) {
    case GroupKind::Dihedral: s = "dihedral:" + std::to_string(dihedral_order); break;
    case GroupKind::Tetrahedral: s = "tetrahedral"; break;
    case GroupKind::Octahedral: s = "octahedral"; break;
    case GroupKind::Icosahedral: s = "icosahedral"; break;
    case GroupKind::HyperIcosahedral: s = "hypericosahedral"; break;
    case GroupKind::Full: s = "trivial"; break;
    }
    if (rotations_only && kind != GroupKind::Full && kind != GroupKind::HyperIcosahedral)
        s += "+rotations";
    return s;
}

SymmetryGroup SymmetryGroup::parse(const std::string& spec, int N, bool rotations_only)
{
    SymmetryGroup g;
    g.ambient_N = N;
    g.rotations_only = rotations_only;
    std::string s = spec;
    const std::string suffix = "+rotations";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        g.rotations_only = true;
        s.resize(s.size() - suffix.size());
    }
    if (s.rfind("dihedral", 0) == 0) {
        g.kind = GroupKind::Dihedral;
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorKind::Validation, "dihedral group needs an order, e.g. dihedral:3");
        try {
            g.dihedral_order = std::stoi(s.substr(colon + 1));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Validation, "bad dihedral order in '" + spec + "'");
        }
    } else if (s == "tetrahedral") {
        g.kind = GroupKind::Tetrahedral;
    } else if (s == "octahedral") {
        g.kind = GroupKind::Octahedral;
    } else if (s == "icosahedral") {
        g.kind = GroupKind::Icosahedral;
    } else if (s == "hypericosahedral") {
        g.kind = GroupKind::HyperIcosahedral;
    } else if (s == "trivial" || s == "full") {
        g.kind = GroupKind::Full;
    } else {
        throw Error(ErrorKind::Validation, "unknown group '" + spec + "'");
    }
    g.validate();
    return g;
}

const std::vector<GroupElement>& group_elements(const SymmetryGroup& group)
{
    group.validate();
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int, bool>, std::vector<GroupElement>> cache;
    const auto key = std::make_tuple(static_cast<int>(group.kind), group.ambient_N, group.dihedral_order,
                                     group.rotations_only);
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, build(group)).first;
    return it->second;
}

double sphere_eigenvalue(int k, int N)
{
    return static_cast<double>(k) * (k + N - 2);
}

long harmonic_dimension(int k, int N)
{
    if (k < 0)
        return 0;
    if (k == 0)
        return 1;
    if (N == 2)
        return 2;
    // (2k+N-2)(k+N-3)!/(k!(N-2)!)
    long binom = 1;  // C(k+N-3, N-3)
    for (int j = 1; j <= N - 3; ++j)
        binom = binom * (k + j) / j;
    return (2L * k + N - 2) * binom / (N - 2);
}

double harmonic_character(const SymmetryGroup& group, const GroupElement& g, int k)
{
    const int N = group.ambient_N;
    if (group.kind == GroupKind::Full)
        return static_cast<double>(harmonic_dimension(k, N));
    if (k == 0)
        return 1.0;
    if (N == 2) {
        if (g.matrix.determinant() < 0.0)
            return 0.0;
        return 2.0 * std::cos(k * std::atan2(g.matrix(1, 0), g.matrix(0, 0)));
    }
    if (N == 3) {
        const double det = g.matrix.determinant() > 0.0 ? 1.0 : -1.0;
        const Eigen::MatrixXd R = det * g.matrix;
        const double phi = std::acos(std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0));
        const double sign = (det < 0.0 && (k % 2)) ? -1.0 : 1.0;
        if (phi < 1e-7)
            return sign * (2.0 * k + 1.0);
        return sign * std::sin((k + 0.5) * phi) / std::sin(phi / 2.0);
    }
    return chebyshev_u_ratio(k, g.alpha_left) * chebyshev_u_ratio(k, g.alpha_right);
}

int character_multiplicity(const SymmetryGroup& group, int k)
{
    const auto& els = group_elements(group);
    double sum = 0.0;
    for (const auto& g : els)
        sum += harmonic_character(group, g, k);
    const double avg = sum / static_cast<double>(els.size());
    const double m = std::round(avg);
    if (std::abs(avg - m) > 1e-6)
        throw Error(ErrorKind::Consistency, "character average is not an integer");
    return static_cast<int>(m);
}

GroupSpectrum group_restricted_spectrum(const SymmetryGroup& group, int k_max)
{
    if (k_max < 1)
        throw Error(ErrorKind::Validation, "k_max must be at least 1");
    group.validate();
    GroupSpectrum spec{group, {}};
    for (int k = 1; k <= k_max; ++k) {
        const int m = character_multiplicity(group, k);
        if (m > 0)
            spec.entries.push_back({k, m, sphere_eigenvalue(k, group.ambient_N)});
    }
    return spec;
}

double g1_threshold(int N)
{
    const double a = N - 2.0;
    return (2.0 - N + std::sqrt(a * a + (16.0 / 9.0) * (N + 2.0) * (N - 1.0))) / 2.0;
}

G1Report check_g1(const GroupSpectrum& spec)
{
    if (spec.entries.empty())
        throw Error(ErrorKind::Precondition, "group spectrum is empty");
    const int N = spec.group.ambient_N;
    G1Report r;
    r.i1 = spec.entries.front().degree;
    r.m1 = spec.entries.front().multiplicity;
    r.threshold = g1_threshold(N);
    r.multiplicity_odd = (r.m1 % 2) == 1;
    r.degree_strict = r.i1 > r.threshold;
    r.degree_nonstrict = r.i1 >= r.threshold;
    r.mu_i1 = spec.entries.front().mu;
    r.mu_bound = (4.0 / 9.0) * (N + 2.0) * (N - 1.0);
    r.mu_bound_holds = r.mu_i1 >= r.mu_bound - 1e-12;
    r.satisfied = r.multiplicity_odd && r.degree_strict;
    return r;
}

double zonal_harmonic(int k, int N, double t)
{
    if (k == 0)
        return 1.0;
    if (N == 2) {
        double a = 1.0, b = t;
        for (int n = 2; n <= k; ++n) {
            const double c = 2.0 * t * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    const double alpha = (N - 2) / 2.0;
    auto gegen = [&](double x) {
        double a = 1.0, b = 2.0 * alpha * x;
        for (int n = 2; n <= k; ++n) {
            const double c = (2.0 * x * (n + alpha - 1.0) * b - (n + 2.0 * alpha - 2.0) * a) / n;
            a = b;
            b = c;
        }
        return b;
    };
    return gegen(t) / gegen(1.0);
}

double sphere_area(int N)
{
    return 2.0 * std::pow(kPi, N / 2.0) / std::tgamma(N / 2.0);
}

std::vector<Eigen::VectorXd> sphere_points(int N, int count, unsigned long long seed)
{
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    if (N == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * kPi * (i + 0.5) / count;
            Eigen::VectorXd x(2);
            x << std::cos(a), std::sin(a);
            pts.push_back(x);
        }
        return pts;
    }
    if (N == 3) {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden * i;
            Eigen::VectorXd x(3);
            x << rho * std::cos(a), rho * std::sin(a), z;
            pts.push_back(x);
        }
        return pts;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(N);
        for (int j = 0; j < N; ++j)
            x[j] = normal(rng);
        pts.push_back(x.normalized());
    }
    return pts;
}

namespace {

std::vector<Eigen::VectorXd> random_points(int N, int count, unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(N);
        for (int j = 0; j < N; ++j)
            x[j] = normal(rng);
        pts.push_back(x.normalized());
    }
    return pts;
}

double averaged_zonal(const std::vector<GroupElement>& els, int k, int N, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y)
{
    double s = 0.0;
    for (const auto& g : els)
        s += zonal_harmonic(k, N, std::clamp(x.dot(g.matrix * y), -1.0, 1.0));
    return s / static_cast<double>(els.size());
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            const double dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1)
            p0 = 1.0;
        const double dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

int invariant_projection_rank(const SymmetryGroup& group, int degree)
{
    if (degree < 0)
        throw Error(ErrorKind::Validation, "degree must be nonnegative");
    group.validate();
    const int N = group.ambient_N;
    const auto& els = group_elements(group);
    const long D = harmonic_dimension(degree, N);
    int J = static_cast<int>(std::min<long>(8, D));
    for (;;) {
        const auto xs = random_points(N, J, 1000003ULL * (degree + 1));
        const auto ys = random_points(N, J, 7919ULL * (degree + 1) + 17);
        Eigen::MatrixXd A(J, J);
        for (int i = 0; i < J; ++i)
            for (int j = 0; j < J; ++j)
                A(i, j) = averaged_zonal(els, degree, N, xs[i], ys[j]);
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-8 * J)
                ++rank;
        if (rank < J || J == D)
            return rank;
        J = static_cast<int>(std::min<long>(2L * J, D));
    }
}

InvariantBasis::InvariantBasis(const SymmetryGroup& group, int degree)
    : group_(group), degree_(degree)
{
    const int N = group.ambient_N;
    const int m = character_multiplicity(group, degree);
    if (m == 0)
        throw Error(ErrorKind::NotFound, "no invariant harmonics at this degree");
    kernel_scale_ = static_cast<double>(harmonic_dimension(degree, N)) / sphere_area(N);
    for (unsigned long long attempt = 0; attempt < 32; ++attempt) {
        const auto ys = random_points(N, m, 424242ULL + 31ULL * degree + 1009ULL * attempt);
        refs_.resize(N, m);
        for (int j = 0; j < m; ++j)
            refs_.col(j) = ys[j];
        Eigen::MatrixXd G(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                G(i, j) = projected_kernel(ys[i], ys[j]);
        G = 0.5 * (G + G.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        if (es.eigenvalues().minCoeff() <= 1e-6 * es.eigenvalues().maxCoeff())
            continue;
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        transform_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(m, m));
        return;
    }
    throw Error(ErrorKind::Degeneracy, "could not find well-conditioned reference points");
}

double InvariantBasis::projected_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const
{
    return kernel_scale_ * averaged_zonal(group_elements(group_), degree_, group_.ambient_N, x, y);
}

Eigen::VectorXd InvariantBasis::evaluate(const Eigen::VectorXd& x) const
{
    const int m = dimension();
    Eigen::VectorXd f(m);
    for (int j = 0; j < m; ++j)
        f[j] = projected_kernel(x, refs_.col(j));
    return transform_ * f;
}

double InvariantBasis::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& coefficients) const
{
    return coefficients.dot(evaluate(x));
}

double sphere_integral(int N, int degree, const std::function<double(const Eigen::VectorXd&)>& f)
{
    if (N == 2) {
        const int n = degree + 2;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * i / n;
            Eigen::VectorXd x(2);
            x << std::cos(a), std::sin(a);
            s += f(x);
        }
        return s * 2.0 * kPi / n;
    }
    if (N == 3) {
        std::vector<double> t, w;
        gauss_legendre(degree / 2 + 2, t, w);
        const int nphi = degree + 2;
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double rho = std::sqrt(1.0 - t[i] * t[i]);
            for (int j = 0; j < nphi; ++j) {
                const double a = 2.0 * kPi * j / nphi;
                Eigen::VectorXd x(3);
                x << rho * std::cos(a), rho * std::sin(a), t[i];
                s += w[i] * f(x);
            }
        }
        return s * 2.0 * kPi / nphi;
    }
    if (N == 4) {
        const int n = degree / 2 + 2;
        double s = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double th = kPi * i / (n + 1.0);
            const double t = std::cos(th), rho = std::sin(th);
            const double wt = kPi / (n + 1.0) * rho * rho;
            s += wt * sphere_integral(3, degree, [&](const Eigen::VectorXd& y) {
                Eigen::VectorXd x(4);
                x << t, rho * y[0], rho * y[1], rho * y[2];
                return f(x);
            });
        }
        return s;
    }
    throw Error(ErrorKind::Configuration, "sphere quadrature implemented for N <= 4");
}

}  // namespace hypbif
