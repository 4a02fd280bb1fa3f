#include "cvqi/serialize.hpp"

#include <cmath>
#include <fstream>

#include "cvqi/errors.hpp"

namespace cvqi {

using nlohmann::json;

void to_json(json& j, const ProbeSpec& p) {
  j = json{{"kind", to_string(p.kind)}, {"coeffs", p.coeffs}, {"n_pr", p.n_pr}};
}

void from_json(const json& j, ProbeSpec& p) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("coeffs"))
    throw PreconditionError("probe json: expected {kind, coeffs[, n_pr]}");
  p = make_probe(probe_kind_from_string(j.at("kind").get<std::string>()),
                 j.at("coeffs").get<std::vector<double>>());
  if (j.contains("n_pr")) {
    const double stated = j.at("n_pr").get<double>();
    if (std::abs(stated - p.n_pr) > 1e-8)
      throw PreconditionError("probe json: n_pr does not match the coefficients");
  }
}

void to_json(json& j, const ScenarioParams& p) {
  j = json{{"r", p.r},           {"n_pr", p.n_pr},       {"n_env", p.n_env},
           {"dim_sig", p.dim_sig}, {"dim_idler", p.dim_idler}, {"dim_env", p.dim_env}};
}

void to_json(json& j, const BoundDiagnostics& d) {
  j = json{{"clipped_eigenmass", d.clipped_eigenmass}, {"clipped_count", d.clipped_count},
           {"truncation_tail", d.truncation_tail},     {"iterations", d.iterations},
           {"blocks", d.blocks}};
}

void to_json(json& j, const ChannelDiagnostics& d) {
  j = json{{"input_tail", d.input_tail},
           {"trace_defect", d.trace_defect},
           {"spill_mass", d.spill_mass},
           {"tail_warning", d.tail_warning}};
}

void to_json(json& j, const OptResult& r) {
  j = json{{"probe", r.probe},
           {"objective", r.objective},
           {"kappa", r.kappa},
           {"s_opt", r.s_opt},
           {"converged", r.converged},
           {"iterations", r.iterations},
           {"kkt_residual", r.kkt_residual},
           {"seed", r.seed},
           {"message", r.message}};
}

void to_json(json& j, const GeneralProbe& g) {
  json states = json::array();
  for (const auto& phi : g.idler_states) {
    json v = json::array();
    for (Eigen::Index i = 0; i < phi.size(); ++i) v.push_back({phi(i).real(), phi(i).imag()});
    states.push_back(std::move(v));
  }
  j = json{{"coeffs", g.coeffs}, {"idler_states", std::move(states)}};
}

void from_json(const json& j, GeneralProbe& g) {
  g.coeffs = j.at("coeffs").get<std::vector<double>>();
  g.idler_states.clear();
  for (const auto& v : j.at("idler_states")) {
    ComplexVector phi(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      phi(static_cast<Eigen::Index>(i)) = Complex(v[i].at(0).get<double>(), v[i].at(1).get<double>());
    g.idler_states.push_back(std::move(phi));
  }
  validate(g);
}

void to_json(json& j, const ReductionConfig& c) {
  j = json{{"dim_sig", c.dim_sig},
           {"dim_idler", c.dim_idler},
           {"dim_env", c.dim_env},
           {"n_env", c.n_env},
           {"r", c.r},
           {"n_pr", c.n_pr},
           {"trials", c.trials},
           {"seed", c.seed},
           {"tolerance", c.tolerance},
           {"dpi_tolerance", c.dpi_tolerance},
           {"direct_tolerance", c.direct_tolerance},
           {"direct_check", c.direct_check}};
}

void to_json(json& j, const TrialReport& t) {
  j = json{{"seed", t.seed},
           {"distance_rho0", t.distance_rho0},
           {"distance_rho1", t.distance_rho1},
           {"trace_residual", t.trace_residual},
           {"kappa_schmidt", t.kappa_schmidt},
           {"kappa_after", t.kappa_after},
           {"kappa_general", t.kappa_general},
           {"gram_min_eigenvalue", t.gram_min_eigenvalue},
           {"pass", t.pass}};
  if (t.measure_prepare_rho0) j["measure_prepare_rho0"] = *t.measure_prepare_rho0;
  if (t.measure_prepare_rho1) j["measure_prepare_rho1"] = *t.measure_prepare_rho1;
  if (!t.pass) j["probe"] = t.probe;
}

void to_json(json& j, const ReductionReport& r) {
  j = json{{"config", r.config},
           {"dim_env", r.dim_env},
           {"max_distance", r.max_distance},
           {"max_trace_residual", r.max_trace_residual},
           {"min_dpi_margin", r.min_dpi_margin},
           {"direct_pass", r.direct_pass},
           {"pass", r.pass},
           {"trials", r.trials}};
  j["schmidt_min_kappa"] = r.schmidt_min_kappa ? json(*r.schmidt_min_kappa) : json(nullptr);
  j["general_min_kappa"] = r.general_min_kappa ? json(*r.general_min_kappa) : json(nullptr);
}

ProbeSpec load_probe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open probe file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw PreconditionError("probe file '" + path + "': " + e.what());
  }
  return j.get<ProbeSpec>();
}

}  // namespace cvqi
