#pragma once

// JSON encodings of probes, optimizer results and verification reports.
// Complex vectors are arrays of [re, im] pairs.

#include <nlohmann/json.hpp>

#include "cvqi/appendix.hpp"
#include "cvqi/bounds.hpp"
#include "cvqi/fock.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"

namespace cvqi {

/// {kind, coeffs, n_pr}
void to_json(nlohmann::json& j, const ProbeSpec& p);
/// Renormalizes coeffs and recomputes n_pr; a stated n_pr must agree to 1e-8.
void from_json(const nlohmann::json& j, ProbeSpec& p);

void to_json(nlohmann::json& j, const ScenarioParams& p);
void to_json(nlohmann::json& j, const BoundDiagnostics& d);
void to_json(nlohmann::json& j, const ChannelDiagnostics& d);

/// {probe, objective, kappa, s_opt, converged, iterations, kkt_residual, seed, message}
void to_json(nlohmann::json& j, const OptResult& r);

/// {coeffs, idler_states: [[[re, im], ...], ...]}
void to_json(nlohmann::json& j, const GeneralProbe& g);
void from_json(const nlohmann::json& j, GeneralProbe& g);

void to_json(nlohmann::json& j, const ReductionConfig& c);
/// The probe is included only for failing trials.
void to_json(nlohmann::json& j, const TrialReport& t);
void to_json(nlohmann::json& j, const ReductionReport& r);

/// Parse a ProbeSpec from a JSON file.
ProbeSpec load_probe(const std::string& path);

}  // namespace cvqi
