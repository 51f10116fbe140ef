#include "hypbif/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

using namespace hypbif;

namespace {

enum ExitCode { kSuccess = 0, kValidation = 2, kSolverFailure = 3, kViolation = 4 };

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Incompatible:
    case ErrorKind::Configuration:
    case ErrorKind::Precondition:
    case ErrorKind::Validation:
        return kValidation;
    case ErrorKind::LemmaViolation:
        return kViolation;
    default:
        return kSolverFailure;
    }
}

struct Options {
    std::string config_file;
    std::optional<std::string> output_dir;
    std::optional<int> N;
    std::optional<double> p;
    std::optional<std::string> group;
    std::optional<std::string> geometry;
    std::optional<unsigned> seed;
    int threads = 0;
    bool parallel = false;

    std::optional<double> r_max, max_step, hole_resolution, shoot_tol, quad_tol;
    std::optional<int> grid_points;

    std::optional<double> R, lambda, lambda_min, lambda_max;
    std::optional<int> n_eigs, points, degrees, samples, k_max, shape_samples;
    std::optional<std::vector<double>> epsilons, radii;
    bool check_group_only = false;
    bool verify_ranks = false;
};

// Run state shared by the subcommands: the effective configuration and where to write.
struct Run {
    json config;
    std::filesystem::path out;
    int threads = 1;

    ModelParams params() const
    {
        ModelParams p;
        update_from_json(config, p);
        return p;
    }
    NumericsConfig numerics() const
    {
        NumericsConfig c;
        update_from_json(config.at("numerics"), c);
        return c;
    }
    GeometryMode geometry() const { return geometry_from_string(config.at("geometry").get<std::string>()); }
    SymmetryGroup group() const
    {
        return SymmetryGroup::parse(config.at("group").get<std::string>(), config.at("N").get<int>());
    }
    std::string path(const std::string& name) const { return (out / name).string(); }
};

std::string default_group(int N)
{
    if (N == 2)
        return "dihedral:3";
    if (N == 4)
        return "hypericosahedral";
    return "icosahedral";
}

json defaults(const std::string& command, int N)
{
    json d = {{"command", command},
              {"N", N},
              {"p", N >= 4 ? 2.0 : 3.0},
              {"group", default_group(N)},
              {"geometry", "exact"},
              {"seed", 1},
              {"numerics", to_json(NumericsConfig{})}};
    if (command == "solve-radial" || command == "qualitative") {
        d["R"] = 1.0;
        d["samples"] = 2000;
    } else if (command == "spectrum") {
        d["lambda"] = 1.0;
        d["n_eigs"] = 3;
    } else if (command == "sigma-curve") {
        d["lambda_min"] = nullptr;
        d["lambda_max"] = 50.0;
        d["points"] = 40;
        d["degrees"] = 3;
    } else if (command == "find-bifurcation") {
        d["lambda_min"] = nullptr;
        d["lambda_max"] = 50.0;
        d["points"] = 40;
        d["epsilons"] = {0.05, 0.1};
        d["shape_samples"] = 200;
        d["k_max"] = 20;
    } else if (command == "check-group") {
        d["k_max"] = 15;
    } else if (command == "convergence-study") {
        d["radii"] = {1.0, 0.5, 0.25, 0.1};
    }
    return d;
}

json cli_overrides(const Options& o)
{
    json j = json::object();
    json num = json::object();
    auto put = [](json& target, const char* key, const auto& opt) {
        if (opt)
            target[key] = *opt;
    };
    put(j, "N", o.N);
    put(j, "p", o.p);
    put(j, "group", o.group);
    put(j, "geometry", o.geometry);
    put(j, "seed", o.seed);
    put(j, "R", o.R);
    put(j, "lambda", o.lambda);
    put(j, "lambda_min", o.lambda_min);
    put(j, "lambda_max", o.lambda_max);
    put(j, "n_eigs", o.n_eigs);
    put(j, "points", o.points);
    put(j, "degrees", o.degrees);
    put(j, "samples", o.samples);
    put(j, "k_max", o.k_max);
    put(j, "shape_samples", o.shape_samples);
    put(j, "epsilons", o.epsilons);
    put(j, "radii", o.radii);
    put(num, "r_max", o.r_max);
    put(num, "max_step", o.max_step);
    put(num, "hole_resolution", o.hole_resolution);
    put(num, "shoot_tol", o.shoot_tol);
    put(num, "quad_tol", o.quad_tol);
    put(num, "grid_points", o.grid_points);
    if (!num.empty())
        j["numerics"] = num;
    return j;
}

Run make_run(const std::string& command, const Options& o)
{
    json file = json::object();
    if (!o.config_file.empty()) {
        std::ifstream is(o.config_file);
        if (!is)
            throw Error(ErrorKind::Configuration, "cannot read config file " + o.config_file);
        try {
            file = json::parse(is);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Configuration, std::string("config file: ") + e.what());
        }
        if (!file.is_object())
            throw Error(ErrorKind::Configuration, "config file must hold a JSON object");
    }
    const json cli = cli_overrides(o);
    int N = 3;
    if (file.contains("N"))
        N = file.at("N").get<int>();
    if (cli.contains("N"))
        N = cli.at("N").get<int>();

    Run run;
    run.config = defaults(command, N);
    std::string out = ".";
    if (const char* env = std::getenv("HYPBIF_OUTPUT_DIR"); env && *env)
        out = env;
    if (file.contains("output_dir")) {
        out = file.at("output_dir").get<std::string>();
        file.erase("output_dir");
    }
    if (o.output_dir)
        out = *o.output_dir;
    file.erase("command");
    run.config.merge_patch(file);
    run.config.merge_patch(cli);
    run.out = out;
    run.threads = o.parallel ? (o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))) : 1;

    try {
        if (command != "check-group")
            run.params().validate();
        run.numerics().validate();
        run.group().validate();
        run.geometry();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Configuration, std::string("config: ") + e.what());
    }
    std::filesystem::create_directories(run.out);
    return run;
}

void emit(const json& body)
{
    std::cout << body.dump(2) << "\n";
}

// Lemma verdicts for the exterior ground state w_R.
json qualitative_verdicts(const Run& run, const ShootingResult& sol, double R, bool& all_hold)
{
    const ModelParams params = run.params();
    const RadialProfile& w = sol.profile;
    json inputs = {{"N", params.N}, {"p", params.p}, {"R", R}};
    json verdicts = json::array();
    all_hold = true;
    auto add = [&](json v) {
        all_hold = all_hold && v.at("verdict") == "holds";
        verdicts.push_back(std::move(v));
    };

    const double gamma = w.decay_exponent;
    const double rate = estimate_decay_rate(w);
    const double sup_ratio = decay_ratio_sup(w);
    const double bound = decay_ratio_bound(params.N);
    add(verdict("decay_rate", inputs, std::abs(rate - gamma) < 1e-2 && sup_ratio < bound,
                {{"gamma", gamma}, {"measured_rate", rate}, {"sup_ratio", sup_ratio}, {"ratio_bound", bound}}));

    const int samples = run.config.at("samples").get<int>();
    try {
        const SignPattern sign = analyze_G_sign(params, R, samples);
        const bool ok = params.N != 2 || sign.kind == SignKind::AlwaysNegative;
        add(verdict("G_prime_sign_pattern", inputs, ok, to_json(sign)));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::LemmaViolation)
            throw;
        add(verdict("G_prime_sign_pattern", inputs, false, {{"error", e.what()}}));
    }

    const RadialProfile E = energy_profile(w, params, run.numerics().quad_tol);
    double max_increase = 0.0;
    for (int i = 0; i + 1 < E.size(); ++i)
        max_increase = std::max(max_increase, E.values[i + 1] - E.values[i]);
    const double scale = std::max(1.0, E.values.cwiseAbs().maxCoeff());
    const double e_end = E.values[E.size() - 1];
    add(verdict("energy_nonincreasing", inputs, max_increase <= 1e-10 * scale && std::abs(e_end) < 1e-6,
                {{"max_increase", max_increase}, {"E_end", e_end}}));

    try {
        const ShapeReport shape = profile_shape_check(w, params);
        const bool ok = shape.critical_points == 1 && shape.peak >= peak_lower_bound(params.p);
        json witness = to_json(shape);
        witness["peak_lower_bound"] = peak_lower_bound(params.p);
        add(verdict("single_peak", inputs, ok, witness));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::LemmaViolation)
            throw;
        add(verdict("single_peak", inputs, false, {{"error", e.what()}}));
    }
    return verdicts;
}

int cmd_solve_radial(const Run& run, bool write_profile)
{
    const ModelParams params = run.params();
    const NumericsConfig cfg = run.numerics();
    const double R = run.config.at("R").get<double>();
    const ShootingResult sol = solve_exterior_ground_state(params, R, cfg);

    bool all_hold = true;
    const json verdicts = qualitative_verdicts(run, sol, R, all_hold);
    json qual = {{"verdicts", verdicts}, {"all_hold", all_hold}};
    write_json(run.path("qualitative.json"), run.config, qual);

    json meta = {{"profile", to_json(sol.profile.meta)},
                 {"slope_at_R", sol.slope_star},
                 {"decay_exponent", sol.profile.decay_exponent},
                 {"nodes", sol.profile.size()},
                 {"r_max", sol.profile.grid.r_max()},
                 {"residual_sup", sol.residual_sup},
                 {"match_radius", sol.match_radius},
                 {"match_defect", sol.match_defect},
                 {"bisection_steps", sol.bracket_history.size()},
                 {"config", run.config}};
    if (write_profile) {
        write_profile_csv(run.path("profile.csv"), run.config, sol.profile);
        write_json(run.path("profile_meta.json"), run.config, meta);
        emit({{"profile", run.path("profile.csv")}, {"meta", meta["profile"]}, {"qualitative", all_hold}});
    } else {
        emit(qual);
    }
    return all_hold ? kSuccess : kViolation;
}

int cmd_spectrum(const Run& run)
{
    const ModelParams params = run.params();
    const NumericsConfig cfg = run.numerics();
    const double lambda = run.config.at("lambda").get<double>();
    const int n_eigs = run.config.at("n_eigs").get<int>();
    const RadialProfile u = solve_lambda_form(params, lambda, run.geometry(), cfg);
    const std::vector<EigenPair> eig = radial_spectrum(u, params, n_eigs, cfg);
    const GroupSpectrum gs = group_restricted_spectrum(run.group(), 20);
    if (gs.entries.empty())
        throw Error(ErrorKind::NotFound, "group has no invariant harmonics up to degree 20");

    json values = json::array();
    for (const auto& e : eig)
        values.push_back(e.eigenvalue);
    const double tau0 = eig.front().eigenvalue;
    json body = {{"lambda", lambda},
                 {"kappa", u.meta.kappa},
                 {"eigenvalues", values},
                 {"morse_index", 1},
                 {"tau0", tau0},
                 {"mu_i1", gs.entries.front().mu},
                 {"lambda0_lower_bound", lambda0_lower_bound(tau0, gs.entries.front().mu, u.meta.kappa)}};
    write_json(run.path("spectrum.json"), run.config, body);

    std::vector<std::string> header = {"r"};
    for (size_t k = 0; k < eig.size(); ++k)
        header.push_back("z" + std::to_string(k));
    std::vector<std::vector<double>> rows(u.size());
    for (int i = 0; i < u.size(); ++i) {
        rows[i].push_back(u.grid.nodes[i]);
        for (const auto& e : eig)
            rows[i].push_back(e.eigenfunction.values[i]);
    }
    write_csv(run.path("eigenfunctions.csv"), run.config, header, rows);
    emit(body);
    return kSuccess;
}

std::vector<double> lambda_grid(const Run& run, double bound)
{
    double lo = 1.05 * bound;
    if (!run.config.at("lambda_min").is_null()) {
        lo = run.config.at("lambda_min").get<double>();
        if (!(lo > bound))
            throw Error(ErrorKind::Validation, "lambda_min " + format_real(lo) +
                                                   " is not above the Lambda_0 bound " + format_real(bound));
    }
    const double hi = run.config.at("lambda_max").get<double>();
    const int points = run.config.at("points").get<int>();
    if (!(hi > lo) || points < 2)
        throw Error(ErrorKind::Validation, "lambda grid needs lambda_max > lambda_min and at least 2 points");
    return log_spaced(lo, hi, points);
}

void write_curve(const Run& run, const SigmaCurve& curve)
{
    std::vector<std::vector<double>> rows;
    for (const auto& s : curve.samples)
        rows.push_back({s.lambda, s.sigma, static_cast<double>(s.dirichlet_count)});
    write_csv(run.path("sigma_deg" + std::to_string(curve.degree) + ".csv"), run.config,
              {"lambda", "sigma", "dirichlet_count"}, rows);
}

int cmd_sigma_curve(const Run& run)
{
    const NumericsConfig cfg = run.numerics();
    const GroupSpectrum gs = group_restricted_spectrum(run.group(), 40);
    const int degrees = run.config.at("degrees").get<int>();
    if (degrees < 1 || static_cast<int>(gs.entries.size()) < degrees)
        throw Error(ErrorKind::Validation, "group has fewer invariant degrees than requested");

    GroundStateCache cache(run.params(), run.geometry(), cfg);
    const double bound = lambda0_bound(gs.entries.front().mu, cache, cfg);
    const std::vector<double> grid = lambda_grid(run, bound);

    SigmaCurveOptions opts;
    opts.lambda0_bound = bound;
    opts.threads = run.threads;
    json curves = json::array();
    for (int k = 0; k < degrees; ++k) {
        const SigmaCurve curve = sigma_curve(gs.entries[k].degree, grid, cache, cfg, opts);
        write_curve(run, curve);
        curves.push_back(to_json(curve));
    }
    json body = {{"lambda0_bound", bound}, {"curves", curves}};
    write_json(run.path("brackets.json"), run.config, body);
    emit(body);
    return kSuccess;
}

int cmd_check_group(const Run& run, bool verify_ranks)
{
    const int k_max = run.config.contains("k_max") ? run.config.at("k_max").get<int>() : 15;
    const GroupSpectrum gs = group_restricted_spectrum(run.group(), k_max);
    json body = {{"spectrum", to_json(gs)}};
    if (gs.entries.empty()) {
        body["g1"] = nullptr;
    } else {
        body["g1"] = to_json(check_g1(gs));
    }
    if (verify_ranks) {
        json ranks = json::array();
        bool agree = true;
        for (int k = 1; k <= k_max; ++k) {
            const int m = character_multiplicity(run.group(), k);
            const int r = invariant_projection_rank(run.group(), k);
            agree = agree && m == r;
            ranks.push_back({{"degree", k}, {"character_multiplicity", m}, {"projection_rank", r}});
        }
        body["ranks"] = ranks;
        body["ranks_agree"] = agree;
    }
    write_json(run.path("group.json"), run.config, body);
    emit(body);
    return kSuccess;
}

int cmd_find_bifurcation(const Run& run, bool check_group_only)
{
    const SymmetryGroup group = run.group();
    const GroupSpectrum gs = group_restricted_spectrum(group, run.config.at("k_max").get<int>());
    const CertificateReport pre = certify_group(gs);
    if (check_group_only) {
        json body = {{"spectrum", to_json(gs)}};
        body["g1"] = gs.entries.empty() ? json(nullptr) : to_json(check_g1(gs));
        emit(body);
        return kSuccess;
    }
    if (!pre.g1) {
        write_json(run.path("certificate.json"), run.config, to_json(pre));
        emit(to_json(pre));
        return kViolation;
    }

    const NumericsConfig cfg = run.numerics();
    GroundStateCache cache(run.params(), run.geometry(), cfg);
    const SpectrumEntry first = gs.entries.front();
    const double bound = lambda0_bound(first.mu, cache, cfg);
    SigmaCurveOptions opts;
    opts.lambda0_bound = bound;
    opts.threads = run.threads;
    const SigmaCurve curve = sigma_curve(first.degree, lambda_grid(run, bound), cache, cfg, opts);
    write_curve(run, curve);

    BifurcationPoint point;
    try {
        point = find_lambda_star(curve, cache, cfg, first.multiplicity);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotFound)
            throw;
        CertificateReport rep = pre;
        rep.passed = false;
        rep.failed_stage = "crossing";
        json body = to_json(rep);
        body["reason"] = e.what();
        write_json(run.path("certificate.json"), run.config, body);
        emit(body);
        return kViolation;
    }
    json bif = to_json(point);
    bif["lambda0_bound"] = bound;
    bif["above_lambda0_bound"] = point.lambda_star > bound;
    write_json(run.path("bifurcation.json"), run.config, bif);

    const CertificateReport rep = certify_local_bifurcation(point, gs, cache, cfg);
    json cert = to_json(rep);
    write_json(run.path("certificate.json"), run.config, cert);

    json shapes = json::array();
    const int n_samples = run.config.at("shape_samples").get<int>();
    const unsigned seed = run.config.at("seed").get<unsigned>();
    for (double eps : run.config.at("epsilons").get<std::vector<double>>()) {
        const BoundaryShape shape = emit_perturbed_domain(point, eps, group, n_samples, seed);
        std::ostringstream tag;
        tag << "shape_eps" << eps;
        std::vector<std::string> header;
        for (int d = 0; d < group.ambient_N; ++d)
            header.push_back("x" + std::to_string(d + 1));
        header.push_back("radius");
        std::vector<std::vector<double>> rows;
        for (size_t i = 0; i < shape.points.size(); ++i) {
            std::vector<double> row(shape.points[i].data(), shape.points[i].data() + shape.points[i].size());
            row.push_back(shape.radii[i]);
            rows.push_back(std::move(row));
        }
        write_csv(run.path(tag.str() + ".csv"), run.config, header, rows);
        write_json(run.path(tag.str() + ".json"), run.config, to_json(shape));
        shapes.push_back(to_json(shape));
    }
    emit({{"bifurcation", bif}, {"certificate", cert}, {"shapes", shapes}});
    return rep.passed ? kSuccess : kViolation;
}

int cmd_convergence(const Run& run)
{
    const std::vector<double> radii = run.config.at("radii").get<std::vector<double>>();
    const std::vector<ConvergenceEntry> entries = convergence_study(run.params(), radii, run.numerics());
    std::vector<std::vector<double>> rows;
    json dist = json::array();
    bool decreasing = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        rows.push_back({entries[i].R, entries[i].h1_distance});
        dist.push_back({{"R", entries[i].R}, {"h1_distance", entries[i].h1_distance}});
        if (i > 0)
            decreasing = decreasing && entries[i].h1_distance < entries[i - 1].h1_distance;
    }
    write_csv(run.path("convergence.csv"), run.config, {"R", "h1_distance"}, rows);
    const ModelParams p = run.params();
    json body = verdict("whole_space_convergence", {{"N", p.N}, {"p", p.p}, {"radii", radii}}, decreasing,
                        {{"distances", dist}});
    write_json(run.path("convergence.json"), run.config, body);
    emit(body);
    return decreasing ? kSuccess : kViolation;
}

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("--config", o.config_file, "JSON configuration file");
    sub->add_option("--output-dir", o.output_dir, "output directory (default $HYPBIF_OUTPUT_DIR or .)");
    sub->add_option("--N", o.N, "dimension of hyperbolic space");
    sub->add_option("--p", o.p, "nonlinearity exponent");
    sub->add_option("--group", o.group, "symmetry group (dihedral:k, tetrahedral, octahedral, icosahedral, hypericosahedral, trivial)");
    sub->add_option("--geometry", o.geometry, "exact or literal")->check(CLI::IsMember({"exact", "literal"}));
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_flag("--parallel", o.parallel, "evaluate lambda samples concurrently");
    sub->add_option("--threads", o.threads, "worker threads for --parallel (default: hardware)");
    sub->add_option("--r-max", o.r_max, "truncation radius (0 selects automatic)");
    sub->add_option("--max-step", o.max_step, "bulk grid spacing");
    sub->add_option("--hole-resolution", o.hole_resolution, "nodes per unit inner radius");
    sub->add_option("--grid-points", o.grid_points, "minimum node count");
    sub->add_option("--shoot-tol", o.shoot_tol, "shooting residual tolerance");
    sub->add_option("--quad-tol", o.quad_tol, "quadrature tolerance");
}

json error_json(const std::string& kind, const std::string& message, int code)
{
    return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ground states, DtN spectra and bifurcation radii for exterior domains of hyperbolic space"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve-radial", "solve the exterior ground state w_R");
    auto* qual = app.add_subcommand("qualitative", "check the qualitative lemmas for w_R");
    auto* spec = app.add_subcommand("spectrum", "radial spectrum of the linearized operator");
    auto* sigma = app.add_subcommand("sigma-curve", "sigma curves for the first group degrees");
    auto* bif = app.add_subcommand("find-bifurcation", "locate and certify Lambda*");
    auto* group = app.add_subcommand("check-group", "group-restricted spectrum and (G1)");
    auto* conv = app.add_subcommand("convergence-study", "distance from w_R to the whole-space ground state");
    for (auto* sub : {solve, qual, spec, sigma, bif, group, conv})
        add_common(sub, o);
    for (auto* sub : {solve, qual})
        sub->add_option("--R", o.R, "inner radius");
    qual->add_option("--samples", o.samples, "samples of the G' sign analysis");
    solve->add_option("--samples", o.samples, "samples of the G' sign analysis");
    spec->add_option("--lambda", o.lambda, "lambda");
    spec->add_option("--n-eigs", o.n_eigs, "number of eigenvalues");
    for (auto* sub : {sigma, bif}) {
        sub->add_option("--lambda-min", o.lambda_min, "smallest lambda (default 1.05 x Lambda_0 bound)");
        sub->add_option("--lambda-max", o.lambda_max, "largest lambda");
        sub->add_option("--points", o.points, "log-spaced lambda samples");
    }
    sigma->add_option("--degrees", o.degrees, "number of group degrees");
    bif->add_option("--epsilon", o.epsilons, "perturbation amplitudes of the emitted shapes");
    bif->add_option("--shape-samples", o.shape_samples, "boundary sample points per shape");
    bif->add_flag("--check-group-only", o.check_group_only, "print the group spectrum and (G1) verdict only");
    for (auto* sub : {bif, group})
        sub->add_option("--k-max", o.k_max, "largest harmonic degree");
    group->add_flag("--verify-ranks", o.verify_ranks, "compare character multiplicities with projection ranks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kSuccess : kValidation;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const Run run = make_run(command, o);
        if (command == "solve-radial")
            return cmd_solve_radial(run, true);
        if (command == "qualitative")
            return cmd_solve_radial(run, false);
        if (command == "spectrum")
            return cmd_spectrum(run);
        if (command == "sigma-curve")
            return cmd_sigma_curve(run);
        if (command == "find-bifurcation")
            return cmd_find_bifurcation(run, o.check_group_only);
        if (command == "check-group")
            return cmd_check_group(run, o.verify_ranks);
        return cmd_convergence(run);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        std::cerr << error_json(to_string(e.kind()), e.what(), code).dump() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << error_json("Internal", e.what(), kSolverFailure).dump() << "\n";
        return kSolverFailure;
    }
}
