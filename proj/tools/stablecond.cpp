// Command-line runner for the verification suites.
//
//   stablecond <identity|asymptotics|harmonicity|absorption|conditioning|all>
//              [--config FILE] [--alpha A --rho R] [--x X ...] [--seed N]
//              [--out DIR] [--workers N] [--list-checks]
//
// Exit code 0 iff every enabled check passes. STABLECOND_WORKERS sets the
// worker count when --workers is absent.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stablecond/errors.hpp"
#include "stablecond/experiments.hpp"

using namespace stablecond;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(ErrorKind::ConfigError, "cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Value of the suite= line, if any.
std::string declared_suite(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    if (trim(line.substr(0, eq)) == "suite") return trim(line.substr(eq + 1));
  }
  return "";
}

struct Overrides {
  std::vector<std::string> configs;
  double alpha = 0.0;
  double rho = 0.5;
  bool has_alpha = false, has_rho = false;
  std::vector<double> xs;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out;
  int workers = -1;
};

SuiteConfig build_config(Suite suite, const Overrides& o) {
  SuiteConfig cfg = default_config(suite);
  for (const auto& path : o.configs) {
    const std::string text = read_file(path);
    const std::string declared = declared_suite(text);
    if (!declared.empty() && parse_suite(declared) != suite) continue;
    cfg = parse_config(text, suite);
  }
  if (o.has_alpha || o.has_rho) {
    const double a = o.has_alpha ? o.alpha : cfg.params.front().alpha;
    cfg.params = {validate_params(a, o.rho)};
  }
  if (!o.xs.empty()) cfg.points = o.xs;
  if (o.has_seed) cfg.seed = o.seed;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.workers >= 0) cfg.sim.workers = o.workers;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for stable processes conditioned to hit an interval"};
  app.require_subcommand(1, 1);
  Overrides o;
  bool list_only = false;
  std::vector<CLI::App*> subs;
  for (const char* name :
       {"identity", "asymptotics", "harmonicity", "absorption", "conditioning", "all"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " suite" +
                                             (std::string(name) == "all" ? "s" : ""));
    sub->add_option("--config", o.configs, "key=value config file (repeatable for all)");
    sub->add_option_function<double>("--alpha", [&](double a) { o.alpha = a; o.has_alpha = true; },
                                      "run a single parameter set with this alpha");
    sub->add_option_function<double>("--rho", [&](double r) { o.rho = r; o.has_rho = true; },
                                      "positivity parameter for --alpha (default 0.5)");
    sub->add_option("--x", o.xs, "start points, replacing the configured list");
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { o.seed = s; o.has_seed = true; },
                                            "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--workers", o.workers, "worker threads (0: STABLECOND_WORKERS or all cores)");
    sub->add_flag("--list-checks", list_only, "print check ids and exit");
    subs.push_back(sub);
  }
  CLI11_PARSE(app, argc, argv);

  std::vector<Suite> suites;
  const std::string chosen = app.get_subcommands().front()->get_name();
  if (chosen == "all") {
    suites = all_suites();
  } else {
    suites = {parse_suite(chosen)};
  }

  try {
    bool all_passed = true;
    std::vector<SuiteSummary> summaries;
    std::string out_dir;
    for (Suite suite : suites) {
      const SuiteConfig cfg = build_config(suite, o);
      if (list_only) {
        for (const auto& task : plan_suite(cfg)) {
          std::cout << to_string(suite) << ' ' << task.check_id << '\n';
        }
        continue;
      }
      const auto results = run_suite(cfg);
      const std::string path = write_suite_csv(cfg, results);
      const auto s = summarize(suite, results);
      summaries.push_back(s);
      out_dir = cfg.out_dir;
      std::cout << to_string(suite) << ": " << s.passed << '/' << s.total << " passed";
      if (s.skipped) std::cout << " (" << s.skipped << " skipped)";
      std::cout << " -> " << path << '\n';
      for (const auto& r : results) {
        if (r.passed) continue;
        all_passed = false;
        std::cout << "  FAIL " << r.check_id << " expected=" << r.expected
                  << " observed=" << r.observed << " tol=" << r.tolerance << " ("
                  << to_string(r.rule) << ")";
        if (!r.reason.empty()) std::cout << " " << r.reason;
        std::cout << '\n';
      }
    }
    if (!list_only) {
      write_summary((std::filesystem::path(out_dir) / "summary.txt").string(), summaries);
    }
    return all_passed ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  }
}
