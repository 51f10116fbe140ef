#include "hypbif/io.hpp"

#include <cstdio>
#include <fstream>

namespace hypbif {

json to_json(const ModelParams& p)
{
    return {{"N", p.N}, {"p", p.p}};
}

json to_json(const NumericsConfig& c)
{
    return {{"r_max", c.r_max},           {"grid_points", c.grid_points}, {"max_step", c.max_step},
            {"hole_resolution", c.hole_resolution}, {"ode_rel_tol", c.ode_rel_tol},
            {"ode_abs_tol", c.ode_abs_tol}, {"shoot_tol", c.shoot_tol},     {"max_bisect", c.max_bisect},
            {"w_ceiling", c.w_ceiling},   {"quad_tol", c.quad_tol}};
}

json to_json(const ProfileMeta& m)
{
    return {{"N", m.N},           {"p", m.p},         {"R", m.R},
            {"lambda", m.lambda}, {"kappa", m.kappa}, {"residual", m.residual}};
}

json to_json(const SignPattern& s)
{
    json j = {{"kind", to_string(s.kind)}, {"alpha", s.alpha},     {"beta", s.beta},
              {"F_first", s.f_first},      {"F_limit", s.f_limit}, {"samples", s.samples}};
    j["change_point"] = s.change_point ? json(*s.change_point) : json(nullptr);
    return j;
}

json to_json(const ShapeReport& s)
{
    return {{"r_peak", s.r_peak}, {"peak", s.peak}, {"critical_points", s.critical_points}};
}

json to_json(const GroupSpectrum& s)
{
    json entries = json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"degree", e.degree}, {"multiplicity", e.multiplicity}, {"mu", e.mu}});
    return {{"group", s.group.name()}, {"N", s.group.ambient_N}, {"entries", entries}};
}

json to_json(const G1Report& r)
{
    return {{"satisfied", r.satisfied},
            {"i1", r.i1},
            {"m1", r.m1},
            {"threshold", r.threshold},
            {"degree_strict", r.degree_strict},
            {"degree_nonstrict", r.degree_nonstrict},
            {"multiplicity_odd", r.multiplicity_odd},
            {"mu_i1", r.mu_i1},
            {"mu_bound", r.mu_bound},
            {"mu_bound_holds", r.mu_bound_holds}};
}

json to_json(const SigmaCurve& c)
{
    json br = json::array();
    for (const auto& b : c.brackets)
        br.push_back({{"lambda_left", b.lambda_left},
                      {"lambda_right", b.lambda_right},
                      {"sigma_left", b.sigma_left},
                      {"sigma_right", b.sigma_right}});
    return {{"degree", c.degree}, {"samples", c.samples.size()}, {"poles", c.poles}, {"brackets", br}};
}

json to_json(const BifurcationPoint& b)
{
    json cands = json::array();
    for (const auto& c : b.candidates)
        cands.push_back({c.lambda_left, c.lambda_right});
    return {{"degree", b.degree},
            {"lambda_star", b.lambda_star},
            {"radius_star", b.radius_star},
            {"sigma_at_lambda_star", b.sigma_star},
            {"delta", b.delta},
            {"sign_left", b.sign_left},
            {"sign_right", b.sign_right},
            {"sign_left_half_delta", b.half_left},
            {"sign_right_half_delta", b.half_right},
            {"kernel_multiplicity", b.kernel_multiplicity},
            {"iterations", b.iterations},
            {"brackets", cands}};
}

json to_json(const CertificateReport& r)
{
    json hs = json::array();
    for (const auto& [d, s] : r.higher_sigma)
        hs.push_back({{"degree", d}, {"sigma", s}});
    return {{"passed", r.passed},
            {"failed_stage", r.failed_stage.empty() ? json(nullptr) : json(r.failed_stage)},
            {"crossing", r.crossing},
            {"crossing_stable_under_half_delta", r.crossing_stable},
            {"g1", r.g1},
            {"multiplicity_odd", r.multiplicity_odd},
            {"higher_modes_positive", r.higher_modes_positive},
            {"higher_sigma", hs}};
}

json to_json(const BoundaryShape& s)
{
    return {{"base_radius", s.base_radius},
            {"epsilon", s.epsilon},
            {"degree", s.degree},
            {"coefficients", std::vector<double>(s.coefficients.data(),
                                                 s.coefficients.data() + s.coefficients.size())},
            {"samples", s.points.size()},
            {"mean_perturbation", s.mean_perturbation},
            {"invariance_defect", s.invariance_defect}};
}

void update_from_json(const json& j, ModelParams& p)
{
    if (j.contains("N"))
        p.N = j.at("N").get<int>();
    if (j.contains("p"))
        p.p = j.at("p").get<double>();
}

void update_from_json(const json& j, NumericsConfig& c)
{
    auto set = [&](const char* key, auto& field) {
        if (j.contains(key))
            field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    set("r_max", c.r_max);
    set("grid_points", c.grid_points);
    set("max_step", c.max_step);
    set("hole_resolution", c.hole_resolution);
    set("ode_rel_tol", c.ode_rel_tol);
    set("ode_abs_tol", c.ode_abs_tol);
    set("shoot_tol", c.shoot_tol);
    set("max_bisect", c.max_bisect);
    set("w_ceiling", c.w_ceiling);
    set("quad_tol", c.quad_tol);
}

std::string config_hash(const json& config)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json provenance(const json& config)
{
    return {{"artifact", "hypbif"}, {"version", kVersion}, {"config_hash", config_hash(config)}};
}

json verdict(const std::string& lemma, const json& inputs, bool holds, const json& witness)
{
    return {{"lemma", lemma}, {"inputs", inputs}, {"verdict", holds ? "holds" : "violated"}, {"witness", witness}};
}

std::string format_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(ErrorKind::Configuration, "cannot open output file " + path);
    return os;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

void write_csv(const std::string& path, const json& config, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream os = open_out(path);
    os << "# " << provenance(config).dump() << "\r\n";
    for (size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << csv_field(header[i]);
    os << "\r\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_real(row[i]);
        os << "\r\n";
    }
}

void write_json(const std::string& path, const json& config, json body)
{
    json out = {{"provenance", provenance(config)}};
    for (auto it = body.begin(); it != body.end(); ++it)
        out[it.key()] = it.value();
    std::ofstream os = open_out(path);
    os << out.dump(2) << "\n";
}

void write_profile_csv(const std::string& path, const json& config, const RadialProfile& profile)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(profile.size());
    for (int i = 0; i < profile.size(); ++i)
        rows.push_back({profile.grid.nodes[i], profile.values[i], profile.derivatives[i]});
    write_csv(path, config, {"r", "value", "derivative"}, rows);
}

}  // namespace hypbif
