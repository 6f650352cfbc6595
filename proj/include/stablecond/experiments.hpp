#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stablecond/pathsim.hpp"

namespace stablecond {

enum class Suite { IDENTITY, ASYMPTOTICS, HARMONICITY_MC, ABSORPTION, CONDITIONING };

const char* to_string(Suite suite);
// Accepts the CLI names: identity, asymptotics, harmonicity, absorption, conditioning.
Suite parse_suite(const std::string& name);
std::vector<Suite> all_suites();

// How observed is compared with expected.
enum class ToleranceRule {
  ABS,      // |observed - expected| <= tolerance
  REL,      // |observed - expected| <= tolerance * |expected|
  UPPER,    // observed <= expected + tolerance
  LOWER,    // observed >= expected - tolerance
  OUTSIDE,  // |observed - expected| > tolerance (negative controls)
  INFO,     // reported only, always passes
};

const char* to_string(ToleranceRule rule);
ToleranceRule parse_rule(const std::string& name);
bool rule_passes(ToleranceRule rule, double expected, double observed, double tolerance);

struct SuiteConfig {
  Suite suite = Suite::IDENTITY;
  std::vector<StableParams> params;
  std::vector<double> points;
  std::vector<double> ys;
  std::vector<double> deltas;
  std::vector<double> eps;
  // Refinement levels (dt, boundary_cutoff) for the absorption suite.
  std::vector<std::pair<double, double>> levels;
  SimConfig sim;
  std::uint64_t seed = 20240611;
  std::string out_dir = "results";
  // Anything else: tolerances (tol.*), family-specific ladders (eps.*),
  // times and sizes. Lists hold every value given for a repeated key.
  std::map<std::string, std::vector<double>> values;
  // Enabled check families; empty means all.
  std::vector<std::string> checks;

  double get(const std::string& key, double fallback) const;
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;
  bool enabled(const std::string& family) const;
  void validate() const;
};

SuiteConfig default_config(Suite suite);

// Flat key=value text, '#' starts a comment, repeated keys build lists. A key
// given in the text replaces the whole default list for that key.
SuiteConfig parse_config(const std::string& text, Suite suite);
SuiteConfig load_config(const std::string& path, Suite suite);

struct CheckResult {
  std::string check_id;
  double alpha = 0.0;
  double rho = 0.0;
  double x = 0.0;
  double eps_or_delta = 0.0;
  double expected = 0.0;
  double observed = 0.0;
  double std_error = 0.0;
  double tolerance = 0.0;
  ToleranceRule rule = ToleranceRule::INFO;
  bool passed = false;
  std::int64_t runtime_ms = 0;
  std::string reason;

  // Fills passed from the rule; returns it.
  bool judge();
};

bool operator==(const CheckResult& a, const CheckResult& b);

void write_csv(std::ostream& out, const std::vector<CheckResult>& results);
std::vector<CheckResult> read_csv(std::istream& in);

// One unit of work. Its rows share the template's identity fields unless the
// body overrides them.
struct CheckTask {
  std::string check_id;
  CheckResult prototype;
  std::function<std::vector<CheckResult>(const SimConfig&)> run;
};

std::vector<CheckTask> plan_suite(const SuiteConfig& cfg);

// Runs every task (concurrently, each on its own stream of cfg.seed), turns
// ScopeError into a passing skipped row and any other failure into a failed
// row, and returns the rows sorted by check_id.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

// Writes <out_dir>/<suite>.csv.
std::string write_suite_csv(const SuiteConfig& cfg, const std::vector<CheckResult>& results);

struct SuiteSummary {
  Suite suite;
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t skipped = 0;
};
SuiteSummary summarize(Suite suite, const std::vector<CheckResult>& results);
void write_summary(const std::string& path, const std::vector<SuiteSummary>& summaries);

// Harmonic function of the limiting conditioned law for a window side.
HarmonicKind limit_harmonic(WindowSide side);

// Upper bound on the relative gap between a rejection estimate conditioned on
// the eps-window and the limiting h-transform, for an event supported in
// y >= y_lo: sup over y of |(h_eps(y)/h(y)) / (h_eps(x)/h(x)) - 1|.
double conditioning_bias_bound(const StableParams& p, double x, ConditioningKind kind,
                               WindowSide side, double eps, double y_lo);

}  // namespace stablecond
