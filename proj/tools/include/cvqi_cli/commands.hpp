#pragma once

// Command implementations behind the `cvqi` executable. Each command takes a
// fully defaulted config struct; parsing lives in run_cli.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cvqi::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalidConfig = 2, kNumericalFailure = 3 };

std::string version();

/// Shortest round-trip decimal form.
std::string format_number(double x);

/// `# key: value` lines; the config is echoed as one compact JSON line.
void write_metadata(std::ostream& out, const std::string& command, const nlohmann::json& config);

struct BoundsConfig {
  std::string probe = "coherent";  // coherent | tmsv | file:<path>
  std::string method = "exact";    // exact | low-r | closed-form
  double n_pr = 0.1;
  double n_env = 0.5;
  double r = 0.01;
  std::size_t dim_sig = 20;
  std::size_t dim_env = 60;
  std::size_t dim_idler = 0;       // two-mode probes; 0 means dim_sig
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const BoundsConfig& c);
nlohmann::json cmd_bounds(const BoundsConfig& config);

struct AdvantageConfig {
  double n_pr_min = 1e-3;
  double n_pr_max = 10.0;
  std::size_t n_pr_count = 60;
  double n_env_min = 1e-3;
  double n_env_max = 100.0;
  std::size_t n_env_count = 60;
  std::vector<double> n_pr_list;   // overrides the log grid when non-empty
  std::vector<double> n_env_list;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const AdvantageConfig& c);
void cmd_sweep_advantage(const AdvantageConfig& config, std::ostream& out);

struct NonOptimalityConfig {
  std::string mode = "single";
  std::vector<double> n_pr_list{0.02, 0.06, 0.1};
  std::vector<double> r_list{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  double n_env = 0.5;
  std::size_t dim_sig = 12;
  std::size_t dim_env = 60;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
};

struct NonOptimalityRow {
  std::string mode;
  double n_pr = 0.0;
  double n_env = 0.0;
  double r = 0.0;
  double kappa_gaussian = 1.0;
  double kappa_opt = 1.0;
  double non_optimality = 0.0;
  bool converged = false;
};

nlohmann::json to_json(const NonOptimalityConfig& c);
/// Rows ordered n_pr outer, r inner, independent of thread scheduling.
std::vector<NonOptimalityRow> nonoptimality_rows(const NonOptimalityConfig& config);
void write_nonoptimality_csv(const NonOptimalityConfig& config,
                             const std::vector<NonOptimalityRow>& rows, std::ostream& out);
void cmd_sweep_nonoptimality(const NonOptimalityConfig& config, std::ostream& out);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "=="
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json details;
  bool pass() const;
};

nlohmann::json to_json(const SuiteReport& r);

struct VerifyConfig {
  std::size_t trials = 50;  // appendix suite
  std::uint64_t seed = 0;
  std::size_t dim_sig = 20;
  std::size_t dim_env = 60;
};

std::vector<std::string> verify_suites();
SuiteReport cmd_verify(const std::string& suite, const VerifyConfig& config);

/// Parse argv, run, print results; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvqi::cli
