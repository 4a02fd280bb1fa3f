#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cvqi/errors.hpp"
#include "cvqi_cli/commands.hpp"

namespace cvqi::cli {

using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw PreconditionError("cannot open output file '" + path + "'");
  file << text;
  if (!file.flush()) throw PreconditionError("cannot write output file '" + path + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum illumination bounds, sweeps and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  std::string out_path;

  BoundsConfig bounds;
  auto* b = app.add_subcommand("bounds", "Chernoff and Helstrom bounds for one scenario");
  b->add_option("--probe", bounds.probe, "coherent, tmsv or file:<path> (probe JSON)")
      ->capture_default_str();
  b->add_option("--method", bounds.method, "exact, low-r or closed-form")
      ->check(CLI::IsMember({"exact", "low-r", "closed-form"}))
      ->capture_default_str();
  b->add_option("--n-pr", bounds.n_pr, "mean probe photon number")->capture_default_str();
  b->add_option("--n-env", bounds.n_env, "mean thermal photon number")->capture_default_str();
  b->add_option("--r", bounds.r, "reflectivity in [0, 1]")->capture_default_str();
  b->add_option("--dim-sig", bounds.dim_sig, "signal (and idler) Fock cutoff")->capture_default_str();
  b->add_option("--dim-env", bounds.dim_env, "environment Fock cutoff")->capture_default_str();
  b->add_option("--dim-idler", bounds.dim_idler, "idler Fock cutoff (two-mode; 0 = dim-sig)")
      ->capture_default_str();
  b->add_option("--seed", bounds.seed)->capture_default_str();
  b->add_option("--out", out_path, "output path (default stdout)");

  AdvantageConfig adv;
  auto* a = app.add_subcommand("sweep-advantage", "Closed-form advantage ratio on a grid (CSV)");
  a->add_option("--n-pr-min", adv.n_pr_min)->capture_default_str();
  a->add_option("--n-pr-max", adv.n_pr_max)->capture_default_str();
  a->add_option("--n-pr-count", adv.n_pr_count)->capture_default_str();
  a->add_option("--n-env-min", adv.n_env_min)->capture_default_str();
  a->add_option("--n-env-max", adv.n_env_max)->capture_default_str();
  a->add_option("--n-env-count", adv.n_env_count)->capture_default_str();
  a->add_option("--n-pr-list", adv.n_pr_list, "explicit n_pr values")->delimiter(',');
  a->add_option("--n-env-list", adv.n_env_list, "explicit n_env values")->delimiter(',');
  a->add_option("--seed", adv.seed)->capture_default_str();
  a->add_option("--out", out_path, "output path (default stdout)");

  NonOptimalityConfig nonopt;
  auto* n = app.add_subcommand("sweep-nonoptimality",
                               "Gaussian probe against the optimized probe (CSV)");
  n->add_option("--mode", nonopt.mode, "single or two")
      ->check(CLI::IsMember({"single", "two"}))
      ->capture_default_str();
  n->add_option("--n-pr-list", nonopt.n_pr_list)->delimiter(',')->capture_default_str();
  n->add_option("--r-list", nonopt.r_list)->delimiter(',')->capture_default_str();
  n->add_option("--n-env", nonopt.n_env)->capture_default_str();
  n->add_option("--dim-sig", nonopt.dim_sig)->capture_default_str();
  n->add_option("--dim-env", nonopt.dim_env)->capture_default_str();
  n->add_option("--restarts", nonopt.restarts)->capture_default_str();
  n->add_option("--seed", nonopt.seed)->capture_default_str();
  n->add_option("--out", out_path, "output path (default stdout)");

  VerifyConfig ver;
  std::string suite;
  auto* v = app.add_subcommand("verify", "Run a verification suite; exit 1 on failure");
  v->add_option("suite", suite, "theorems, lemma, appendix or pipeline")
      ->required()
      ->check(CLI::IsMember(verify_suites()));
  v->add_option("--trials", ver.trials, "appendix trials")->capture_default_str();
  v->add_option("--seed", ver.seed)->capture_default_str();
  v->add_option("--dim-sig", ver.dim_sig)->capture_default_str();
  v->add_option("--dim-env", ver.dim_env)->capture_default_str();
  v->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*b) {
      emit(cmd_bounds(bounds).dump(2) + "\n", out_path, out);
    } else if (*a) {
      std::ostringstream csv;
      cmd_sweep_advantage(adv, csv);
      emit(csv.str(), out_path, out);
    } else if (*n) {
      std::ostringstream csv;
      cmd_sweep_nonoptimality(nonopt, csv);
      emit(csv.str(), out_path, out);
    } else if (*v) {
      const SuiteReport rep = cmd_verify(suite, ver);
      json j = to_json(rep);
      j["version"] = version();
      emit(j.dump(2) + "\n", out_path, out);
      for (const auto& c : rep.checks)
        err << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << format_number(c.value) << ' '
            << c.relation << ' ' << format_number(c.threshold) << '\n';
      return rep.pass() ? kOk : kVerifyFailed;
    }
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}

}  // namespace cvqi::cli
