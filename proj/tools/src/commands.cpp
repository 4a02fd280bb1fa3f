#include "cvqi_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>

#include "cvqi/appendix.hpp"
#include "cvqi/bounds.hpp"
#include "cvqi/closedform.hpp"
#include "cvqi/errors.hpp"
#include "cvqi/fock.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"
#include "cvqi/serialize.hpp"
#include "cvqi_cli/checks.hpp"
#include "cvqi_cli/pool.hpp"

#ifndef CVQI_VERSION
#define CVQI_VERSION "0.0.0"
#endif

namespace cvqi::cli {

using nlohmann::json;

std::string version() { return CVQI_VERSION; }

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

void write_metadata(std::ostream& out, const std::string& command, const json& config) {
  out << "# cvqi " << version() << "\n";
  out << "# command: " << command << "\n";
  if (config.contains("seed")) out << "# seed: " << config.at("seed").dump() << "\n";
  out << "# config: " << config.dump() << "\n";
}

// ---------------------------------------------------------------- bounds

json to_json(const BoundsConfig& c) {
  return {{"probe", c.probe},     {"method", c.method},   {"n_pr", c.n_pr},
          {"n_env", c.n_env},     {"r", c.r},             {"dim_sig", c.dim_sig},
          {"dim_env", c.dim_env}, {"dim_idler", c.dim_idler}, {"seed", c.seed}};
}

namespace {

ProbeSpec resolve_probe(const BoundsConfig& c) {
  const FockSpace space(c.dim_sig);
  if (c.probe == "coherent") return coherent_state(space, std::sqrt(c.n_pr));
  if (c.probe == "tmsv") return tmsv_probe(space, c.n_pr);
  if (c.probe.rfind("file:", 0) == 0) return load_probe(c.probe.substr(5));
  throw PreconditionError("bounds: --probe must be coherent, tmsv or file:<path>");
}

}  // namespace

json cmd_bounds(const BoundsConfig& c) {
  if (c.method != "exact" && c.method != "low-r" && c.method != "closed-form")
    throw PreconditionError("bounds: --method must be exact, low-r or closed-form");
  const ProbeSpec probe = resolve_probe(c);
  const bool two = probe.kind == ProbeKind::TwoModeSchmidt;
  if (c.dim_idler != 0 && (!two || c.dim_idler != probe.dim()))
    throw PreconditionError("bounds: --dim-idler must equal the Schmidt dimension of a two-mode probe");

  ScenarioParams p;
  p.r = c.r;
  p.n_pr = probe.n_pr;
  p.n_env = c.n_env;
  p.dim_sig = probe.dim();
  p.dim_idler = two ? probe.dim() : 0;
  p.dim_env = c.dim_env;
  p.validate();

  json out;
  out["version"] = version();
  out["config"] = to_json(c);
  out["scenario"] = p;
  out["probe_kind"] = to_string(probe.kind);
  out["probe_tail"] = probe.tail_mass;

  if (c.method == "closed-form") {
    if (c.probe != "coherent" && c.probe != "tmsv")
      throw PreconditionError("bounds: closed-form needs --probe coherent or tmsv");
    out["kappa"] = two ? kappa_q(c.r, c.n_pr, c.n_env) : kappa_c(c.r, c.n_pr, c.n_env);
    out["s_opt"] = 0.5;
    out["p_err_helstrom"] = nullptr;
    out["diagnostics"] = json::object();
    return out;
  }

  const EnvironmentSpec env = thermal_env(FockSpace(c.dim_env), c.n_env);
  const StatePair pair = two ? received_states_two(probe, env, p) : received_states_single(probe, env, p);
  const BoundResult hel = helstrom(pair);
  BoundResult kap;
  if (c.method == "exact") {
    kap = chernoff_exact(pair);
  } else {
    const ComplexMatrix delta = two ? delta_rho_two(probe, env) : delta_rho_single(probe, env);
    const Rho0Eigensystem eig = two ? product_eigensystem(env, probe) : environment_eigensystem(env);
    kap = chernoff_low_r(delta, eig, c.r);
  }
  out["kappa"] = kap.value;
  out["s_opt"] = kap.s_opt;
  out["p_err_helstrom"] = hel.value;
  out["diagnostics"] = {{"bound", kap.diagnostics},
                        {"helstrom", hel.diagnostics},
                        {"channel", pair.diagnostics}};
  return out;
}

// ------------------------------------------------------- sweep-advantage

json to_json(const AdvantageConfig& c) {
  json j = {{"n_pr_min", c.n_pr_min},   {"n_pr_max", c.n_pr_max},   {"n_pr_count", c.n_pr_count},
            {"n_env_min", c.n_env_min}, {"n_env_max", c.n_env_max}, {"n_env_count", c.n_env_count},
            {"seed", c.seed}};
  if (!c.n_pr_list.empty()) j["n_pr_list"] = c.n_pr_list;
  if (!c.n_env_list.empty()) j["n_env_list"] = c.n_env_list;
  return j;
}

void cmd_sweep_advantage(const AdvantageConfig& c, std::ostream& out) {
  const auto n_pr = c.n_pr_list.empty() ? log_space(c.n_pr_min, c.n_pr_max, c.n_pr_count) : c.n_pr_list;
  const auto n_env =
      c.n_env_list.empty() ? log_space(c.n_env_min, c.n_env_max, c.n_env_count) : c.n_env_list;
  if (n_pr.empty() || n_env.empty()) throw PreconditionError("sweep-advantage: empty grid");

  std::vector<AdvantagePoint> grid(n_pr.size() * n_env.size());
  parallel_for(n_pr.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < n_env.size(); ++j)
      grid[i * n_env.size() + j] = advantage_point(n_pr[i], n_env[j]);
  });

  write_metadata(out, "sweep-advantage", to_json(c));
  out << "n_pr,n_env,ratio,kappa_c_coeff,kappa_q_coeff\n";
  for (const auto& g : grid)
    out << format_number(g.n_pr) << ',' << format_number(g.n_env) << ',' << format_number(g.ratio)
        << ',' << format_number(g.kappa_c_coeff) << ',' << format_number(g.kappa_q_coeff) << '\n';
}

// --------------------------------------------------- sweep-nonoptimality

json to_json(const NonOptimalityConfig& c) {
  return {{"mode", c.mode},       {"n_pr_list", c.n_pr_list}, {"r_list", c.r_list},
          {"n_env", c.n_env},     {"dim_sig", c.dim_sig},     {"dim_env", c.dim_env},
          {"restarts", c.restarts}, {"seed", c.seed}};
}

std::vector<NonOptimalityRow> nonoptimality_rows(const NonOptimalityConfig& c) {
  const ProbeMode mode = probe_mode_from_string(c.mode);
  if (c.n_pr_list.empty() || c.r_list.empty())
    throw PreconditionError("sweep-nonoptimality: empty grid");
  std::vector<NonOptimalityRow> rows(c.n_pr_list.size() * c.r_list.size());
  for (std::size_t i = 0; i < c.n_pr_list.size(); ++i)
    for (std::size_t j = 0; j < c.r_list.size(); ++j) {
      auto& row = rows[i * c.r_list.size() + j];
      row.mode = c.mode;
      row.n_pr = c.n_pr_list[i];
      row.n_env = c.n_env;
      row.r = c.r_list[j];
      ScenarioParams p;
      p.r = row.r;
      p.n_pr = row.n_pr;
      p.n_env = c.n_env;
      p.dim_sig = c.dim_sig;
      p.dim_env = c.dim_env;
      p.validate();
    }

  OptimizerOptions opts;
  opts.restarts = c.restarts;
  opts.seed = c.seed;
  parallel_for(rows.size(), [&](std::size_t k) {
    auto& row = rows[k];
    ScenarioParams p;
    p.r = row.r;
    p.n_pr = row.n_pr;
    p.n_env = row.n_env;
    p.dim_sig = c.dim_sig;
    p.dim_env = c.dim_env;
    const NonOptimality no = gaussian_non_optimality(mode, p, opts);
    row.kappa_gaussian = no.kappa_gaussian;
    row.kappa_opt = no.kappa_opt;
    row.non_optimality = no.value;
    row.converged = no.converged;
  });
  return rows;
}

void write_nonoptimality_csv(const NonOptimalityConfig& c, const std::vector<NonOptimalityRow>& rows,
                             std::ostream& out) {
  write_metadata(out, "sweep-nonoptimality", to_json(c));
  out << "mode,n_pr,n_env,r,kappa_gaussian,kappa_opt,non_optimality,converged\n";
  for (const auto& r : rows)
    out << r.mode << ',' << format_number(r.n_pr) << ',' << format_number(r.n_env) << ','
        << format_number(r.r) << ',' << format_number(r.kappa_gaussian) << ','
        << format_number(r.kappa_opt) << ',' << format_number(r.non_optimality) << ','
        << (r.converged ? 1 : 0) << '\n';
}

void cmd_sweep_nonoptimality(const NonOptimalityConfig& c, std::ostream& out) {
  write_nonoptimality_csv(c, nonoptimality_rows(c), out);
}

// ---------------------------------------------------------------- verify

bool SuiteReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}, {"details", r.details}};
}

std::vector<std::string> verify_suites() { return {"theorems", "lemma", "appendix", "pipeline"}; }

SuiteReport cmd_verify(const std::string& suite, const VerifyConfig& c) {
  SuiteReport rep;
  rep.suite = suite;
  auto take = [&](CheckGroup g) {
    for (auto& x : g.checks) rep.checks.push_back(std::move(x));
    rep.details[g.name] = std::move(g.details);
  };
  if (suite == "theorems") {
    take(coherent_optimum_checks(c.dim_sig, c.seed));
    take(tmsv_optimum_checks(c.dim_sig, c.dim_env));
  } else if (suite == "lemma") {
    take(g_functional_checks(c.dim_sig, c.seed));
  } else if (suite == "appendix") {
    take(appendix_checks(1.0, 1e-9, c.trials, c.seed));
    take(appendix_checks(0.3, 1e-6, c.trials, c.seed));
  } else if (suite == "pipeline") {
    take(pipeline_checks(ProbeKind::SingleMode, c.dim_sig, c.dim_env));
    take(pipeline_checks(ProbeKind::TwoModeSchmidt, c.dim_sig, c.dim_env));
  } else {
    throw PreconditionError("verify: unknown suite '" + suite +
                            "' (expected theorems, lemma, appendix or pipeline)");
  }
  return rep;
}

}  // namespace cvqi::cli
