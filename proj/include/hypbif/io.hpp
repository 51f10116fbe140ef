#pragma once

#include "hypbif/bifurcation.hpp"
#include "hypbif/core.hpp"
#include "hypbif/dtn.hpp"
#include "hypbif/harmonics.hpp"
#include "hypbif/qualitative.hpp"
#include "hypbif/radial.hpp"
#include "hypbif/spectral.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace hypbif {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

json to_json(const ModelParams& p);
json to_json(const NumericsConfig& c);
json to_json(const ProfileMeta& m);
json to_json(const SignPattern& s);
json to_json(const ShapeReport& s);
json to_json(const GroupSpectrum& s);
json to_json(const G1Report& r);
json to_json(const SigmaCurve& c);
json to_json(const BifurcationPoint& b);
json to_json(const CertificateReport& r);
json to_json(const BoundaryShape& s);

// Missing keys keep the incoming values.
void update_from_json(const json& j, ModelParams& p);
void update_from_json(const json& j, NumericsConfig& c);

// FNV-1a of the compact serialization.
std::string config_hash(const json& config);

json provenance(const json& config);

// {lemma, inputs, verdict, witness}
json verdict(const std::string& lemma, const json& inputs, bool holds, const json& witness);

std::string format_real(double x);

// RFC-4180 table preceded by a single "# {provenance}" line.
void write_csv(const std::string& path, const json& config, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_json(const std::string& path, const json& config, json body);

void write_profile_csv(const std::string& path, const json& config, const RadialProfile& profile);

}  // namespace hypbif
