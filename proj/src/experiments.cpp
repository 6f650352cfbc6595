#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "stablecond/errors.hpp"
#include "stablecond/experiments.hpp"

namespace stablecond {

namespace {

constexpr const char* kHeader =
    "check_id,alpha,rho,x,eps_or_delta,expected,observed,std_error,tolerance,passed,runtime_ms,"
    "rule,reason";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    raise(ErrorKind::ConfigError, "bad number in results file: '" + s + "'");
  }
  return v;
}

bool same(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || std::memcmp(&a, &b, sizeof a) == 0;
}

// FNV-1a, so that a check keeps its random stream whatever else is enabled.
std::uint64_t stream_of(const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

double harmonic_ratio(const StableParams& p, double y, ConditioningKind kind, WindowSide side,
                      double eps) {
  const ExteriorPoint ye(y);
  double h_eps = 0.0;
  switch (kind) {
    case ConditioningKind::CLOSEST_REACH_WINDOW:
      h_eps = closest_reach_mass(p, ye, HittingWindow(1.0, 1.0 + eps, side));
      break;
    case ConditioningKind::ENTRANCE_WINDOW:
      h_eps = entrance_window_mass(p, ye, eps, side);
      break;
    case ConditioningKind::CIRC_CLOSEST_REACH_WINDOW:
      h_eps = avoid_zero_e(p, y) *
              circ_closest_reach_mass(p, ye, HittingWindow(1.0, 1.0 + eps, side),
                                      limit_harmonic(side));
      break;
  }
  return h_eps / evaluate_harmonic(p, limit_harmonic(side), y);
}

}  // namespace

const char* to_string(ToleranceRule rule) {
  switch (rule) {
    case ToleranceRule::ABS: return "abs";
    case ToleranceRule::REL: return "rel";
    case ToleranceRule::UPPER: return "upper";
    case ToleranceRule::LOWER: return "lower";
    case ToleranceRule::OUTSIDE: return "outside";
    case ToleranceRule::INFO: return "info";
  }
  return "?";
}

ToleranceRule parse_rule(const std::string& name) {
  for (auto r : {ToleranceRule::ABS, ToleranceRule::REL, ToleranceRule::UPPER,
                 ToleranceRule::LOWER, ToleranceRule::OUTSIDE, ToleranceRule::INFO}) {
    if (name == to_string(r)) return r;
  }
  raise(ErrorKind::ConfigError, "unknown tolerance rule '" + name + "'");
}

bool rule_passes(ToleranceRule rule, double expected, double observed, double tolerance) {
  if (rule == ToleranceRule::INFO) return true;
  if (!std::isfinite(observed) || !std::isfinite(expected) || std::isnan(tolerance)) return false;
  const double d = observed - expected;
  switch (rule) {
    case ToleranceRule::ABS: return std::fabs(d) <= tolerance;
    case ToleranceRule::REL: return std::fabs(d) <= tolerance * std::fabs(expected);
    case ToleranceRule::UPPER: return d <= tolerance;
    case ToleranceRule::LOWER: return d >= -tolerance;
    case ToleranceRule::OUTSIDE: return std::fabs(d) > tolerance;
    case ToleranceRule::INFO: return true;
  }
  return false;
}

bool CheckResult::judge() {
  passed = rule_passes(rule, expected, observed, tolerance);
  return passed;
}

bool operator==(const CheckResult& a, const CheckResult& b) {
  return a.check_id == b.check_id && same(a.alpha, b.alpha) && same(a.rho, b.rho) &&
         same(a.x, b.x) && same(a.eps_or_delta, b.eps_or_delta) && same(a.expected, b.expected) &&
         same(a.observed, b.observed) && same(a.std_error, b.std_error) &&
         same(a.tolerance, b.tolerance) && a.rule == b.rule && a.passed == b.passed &&
         a.runtime_ms == b.runtime_ms && a.reason == b.reason;
}

void write_csv(std::ostream& out, const std::vector<CheckResult>& results) {
  out << kHeader << '\n';
  for (const auto& r : results) {
    out << quote(r.check_id) << ',' << format_double(r.alpha) << ',' << format_double(r.rho)
        << ',' << format_double(r.x) << ',' << format_double(r.eps_or_delta) << ','
        << format_double(r.expected) << ',' << format_double(r.observed) << ','
        << format_double(r.std_error) << ',' << format_double(r.tolerance) << ','
        << (r.passed ? "true" : "false") << ',' << r.runtime_ms << ',' << to_string(r.rule)
        << ',' << quote(r.reason) << '\n';
  }
}

std::vector<CheckResult> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    raise(ErrorKind::ConfigError, "results file has an unexpected header");
  }
  std::vector<CheckResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) raise(ErrorKind::ConfigError, "results row has the wrong field count");
    CheckResult r;
    r.check_id = f[0];
    r.alpha = parse_double(f[1]);
    r.rho = parse_double(f[2]);
    r.x = parse_double(f[3]);
    r.eps_or_delta = parse_double(f[4]);
    r.expected = parse_double(f[5]);
    r.observed = parse_double(f[6]);
    r.std_error = parse_double(f[7]);
    r.tolerance = parse_double(f[8]);
    if (f[9] != "true" && f[9] != "false") raise(ErrorKind::ConfigError, "bad passed field");
    r.passed = f[9] == "true";
    r.runtime_ms = static_cast<std::int64_t>(std::stoll(f[10]));
    r.rule = parse_rule(f[11]);
    r.reason = f[12];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto tasks = plan_suite(cfg);
  if (tasks.empty()) raise(ErrorKind::ConfigError, "no checks enabled");
  const int total = resolve_workers(cfg.sim.workers);
  const int outer = std::max(1, std::min<int>(total, static_cast<int>(tasks.size())));
  const int inner = std::max(1, total / outer);

  std::vector<std::vector<CheckResult>> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto& task = tasks[k];
      SimConfig sim = cfg.sim;
      sim.rng = RngStream(cfg.seed, stream_of(task.check_id));
      sim.workers = inner;
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<CheckResult> out;
      try {
        out = task.run(sim);
      } catch (const Error& e) {
        CheckResult r = task.prototype;
        if (e.kind() == ErrorKind::ScopeError) {
          r.rule = ToleranceRule::INFO;
          r.passed = true;
          r.reason = std::string("skipped: ") + e.what();
        } else {
          r.observed = std::nan("");
          r.passed = false;
          r.reason = std::string(to_string(e.kind())) + ": " + e.what();
        }
        out = {r};
      } catch (const std::exception& e) {
        CheckResult r = task.prototype;
        r.observed = std::nan("");
        r.passed = false;
        r.reason = e.what();
        out = {r};
      }
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      for (auto& r : out) {
        if (r.runtime_ms == 0) r.runtime_ms = ms;
      }
      rows[k] = std::move(out);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < outer; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<CheckResult> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  std::stable_sort(all.begin(), all.end(), [](const CheckResult& a, const CheckResult& b) {
    return a.check_id < b.check_id;
  });
  return all;
}

std::string write_suite_csv(const SuiteConfig& cfg, const std::vector<CheckResult>& results) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / (std::string(to_string(cfg.suite)) + ".csv")).string();
  std::ofstream f(path);
  if (!f) raise(ErrorKind::ConfigError, "cannot write " + path);
  write_csv(f, results);
  return path;
}

SuiteSummary summarize(Suite suite, const std::vector<CheckResult>& results) {
  SuiteSummary s{suite};
  s.total = results.size();
  for (const auto& r : results) {
    if (r.passed) ++s.passed;
    if (r.reason.rfind("skipped:", 0) == 0) ++s.skipped;
  }
  return s;
}

void write_summary(const std::string& path, const std::vector<SuiteSummary>& summaries) {
  std::ofstream f(path);
  if (!f) raise(ErrorKind::ConfigError, "cannot write " + path);
  std::size_t total = 0, passed = 0;
  for (const auto& s : summaries) {
    f << to_string(s.suite) << ": " << s.passed << '/' << s.total << " passed";
    if (s.skipped) f << " (" << s.skipped << " skipped)";
    f << '\n';
    total += s.total;
    passed += s.passed;
  }
  f << "all: " << passed << '/' << total << " passed\n";
}

HarmonicKind limit_harmonic(WindowSide side) {
  switch (side) {
    case WindowSide::POSITIVE: return HarmonicKind::V1;
    case WindowSide::NEGATIVE: return HarmonicKind::VMINUS1;
    case WindowSide::BOTH: return HarmonicKind::V;
  }
  return HarmonicKind::V;
}

double conditioning_bias_bound(const StableParams& p, double x, ConditioningKind kind,
                               WindowSide side, double eps, double y_lo) {
  if (!(y_lo > 1.0 + eps)) raise(ErrorKind::DomainError, "the event must stay clear of the window");
  const double at_x = harmonic_ratio(p, x, kind, side, eps);
  // The ratio tends to a constant at infinity; 1e5 is far enough for the
  // supremum to settle to well below the size of the bound itself.
  double sup = 0.0;
  const double lo = std::log(y_lo), hi = std::log(1e5);
  const int n = static_cast<int>(std::ceil((hi - lo) / 0.05));
  for (int i = 0; i <= n; ++i) {
    const double y = std::exp(lo + (hi - lo) * i / n);
    sup = std::max(sup, std::fabs(harmonic_ratio(p, y, kind, side, eps) / at_x - 1.0));
  }
  return sup;
}

}  // namespace stablecond
