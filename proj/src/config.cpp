#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stablecond/errors.hpp"
#include "stablecond/experiments.hpp"

namespace stablecond {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    raise(ErrorKind::ConfigError, "bad number '" + t + "' for key " + key);
  }
  return v;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& key) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) raise(ErrorKind::ConfigError, key + " expects two values a,b");
  return {parse_number(s.substr(0, comma), key), parse_number(s.substr(comma + 1), key)};
}

std::vector<StableParams> params_of(std::initializer_list<std::pair<double, double>> list) {
  std::vector<StableParams> out;
  for (const auto& [a, r] : list) out.push_back(validate_params(a, r));
  return out;
}

}  // namespace

const char* to_string(Suite suite) {
  switch (suite) {
    case Suite::IDENTITY: return "identity";
    case Suite::ASYMPTOTICS: return "asymptotics";
    case Suite::HARMONICITY_MC: return "harmonicity";
    case Suite::ABSORPTION: return "absorption";
    case Suite::CONDITIONING: return "conditioning";
  }
  return "?";
}

Suite parse_suite(const std::string& name) {
  for (Suite s : all_suites()) {
    if (name == to_string(s)) return s;
  }
  raise(ErrorKind::ConfigError, "unknown suite '" + name + "'");
}

std::vector<Suite> all_suites() {
  return {Suite::IDENTITY, Suite::ASYMPTOTICS, Suite::HARMONICITY_MC, Suite::ABSORPTION,
          Suite::CONDITIONING};
}

double SuiteConfig::get(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end() || it->second.empty()) return fallback;
  return it->second.back();
}

std::vector<double> SuiteConfig::get_list(const std::string& key,
                                          std::vector<double> fallback) const {
  const auto it = values.find(key);
  if (it == values.end() || it->second.empty()) return fallback;
  return it->second;
}

bool SuiteConfig::enabled(const std::string& family) const {
  return checks.empty() || std::find(checks.begin(), checks.end(), family) != checks.end();
}

void SuiteConfig::validate() const {
  if (params.empty()) raise(ErrorKind::ConfigError, "no parameter sets");
  for (const auto& p : params) {
    try {
      validate_params(p.alpha, p.rho);
    } catch (const Error& e) {
      raise(ErrorKind::ConfigError, e.what());
    }
  }
  if (points.empty()) raise(ErrorKind::ConfigError, "no start points");
  for (double x : points) {
    if (!(std::abs(x) > 1.0) || !std::isfinite(x)) {
      raise(ErrorKind::ConfigError, "start points must lie outside [-1, 1]");
    }
  }
  if (suite == Suite::IDENTITY && (ys.empty() || deltas.empty())) {
    raise(ErrorKind::ConfigError, "identity suite needs y points and a delta ladder");
  }
  if (suite == Suite::ABSORPTION && levels.empty()) {
    raise(ErrorKind::ConfigError, "absorption suite needs at least one refinement level");
  }
  if (suite == Suite::CONDITIONING && (eps.empty() || deltas.empty())) {
    raise(ErrorKind::ConfigError, "conditioning suite needs an eps ladder and delta");
  }
  try {
    sim.validate();
  } catch (const Error& e) {
    raise(ErrorKind::ConfigError, e.what());
  }
}

SuiteConfig default_config(Suite suite) {
  SuiteConfig c;
  c.suite = suite;
  auto& v = c.values;
  switch (suite) {
    case Suite::IDENTITY:
      c.params = params_of({{0.5, 0.5}, {0.5, 0.3}, {1.2, 0.45}, {1.5, 0.5}, {1.8, 0.52}});
      c.points = {1.1, -1.1, 2.0, -2.0, 5.0, -5.0, 20.0, -20.0};
      c.ys = {1.05, 1.5, 3.0};
      c.deltas = {1e-4, 1e-5, 1e-6};
      v["tol.identity"] = {1e-8};
      v["tol.green_ratio"] = {1e-3};
      v["tol.green_floor"] = {1e-7};
      break;
    case Suite::ASYMPTOTICS:
      c.params = params_of({{0.5, 0.5}, {0.5, 0.3}, {1.0, 0.5}, {1.5, 0.45}, {1.5, 0.5}});
      c.points = {2.0, -2.0, 3.0, -3.0};
      v["eps.closest_reach"] = {1e-5};
      v["eps.entrance"] = {1e-4};
      v["eps.circ"] = {1e-5};
      v["eps.side_selection"] = {1e-2, 1e-3, 1e-4};
      v["tol.ratio"] = {1e-3};
      v["tol.normalization"] = {1e-8};
      v["tol.slope"] = {0.1};
      break;
    case Suite::HARMONICITY_MC:
      c.params = params_of({{0.5, 0.5}, {1.5, 0.5}});
      c.points = {2.0};
      c.sim.dt = 1e-4;
      c.sim.horizon = 100.0;
      c.sim.n_paths = 100000;
      v["k.inner"] = {1.2};
      v["k.outer"] = {3.0};
      v["time"] = {0.1, 0.5};
      v["dt.excessive"] = {1e-3};
      v["n_paths.excessive"] = {20000};
      v["tol.se"] = {3.0};
      v["tol.drift"] = {0.02};
      break;
    case Suite::ABSORPTION:
      c.params = params_of({{1.5, 0.5}, {0.5, 0.5}});
      c.points = {2.0};
      c.levels = {{4e-3, 1e-6}, {1e-3, 1e-8}};
      c.sim.horizon = 50.0;
      c.sim.n_paths = 2000;
      v["n_paths.survival"] = {10000};
      v["n_paths.split"] = {2000};
      v["tol.killed"] = {0.99};
      v["tol.window"] = {0.95};
      v["window.width"] = {0.1};
      v["tol.se"] = {3.0};
      break;
    case Suite::CONDITIONING:
      c.params = params_of({{0.5, 0.5}, {1.5, 0.5}});
      c.points = {3.0};
      c.eps = {0.2, 0.1, 0.05};
      c.deltas = {0.1};
      c.sim.dt = 1e-3;
      c.sim.n_paths = 400000;
      v["time"] = {0.5};
      v["event.level"] = {2.0};
      v["horizon.factor"] = {2.0};
      v["n_paths.weighted"] = {200000};
      v["n_paths.circ"] = {40000};
      v["min_accepted"] = {100};
      v["tol.se"] = {3.0};
      break;
  }
  return c;
}

SuiteConfig parse_config(const std::string& text, Suite suite) {
  SuiteConfig c = default_config(suite);
  std::map<std::string, bool> seen;
  auto first = [&](const std::string& key) {
    const bool was = seen[key];
    seen[key] = true;
    return !was;
  };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      raise(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key or value");
    }
    const bool fresh = first(key);
    if (key == "suite") {
      if (parse_suite(val) != suite) {
        raise(ErrorKind::ConfigError, "config is for suite " + val + ", not " + to_string(suite));
      }
    } else if (key == "param") {
      if (fresh) c.params.clear();
      const auto [a, r] = parse_pair(val, key);
      c.params.push_back(StableParams{a, r, 1.0 - r});
    } else if (key == "point") {
      if (fresh) c.points.clear();
      c.points.push_back(parse_number(val, key));
    } else if (key == "y") {
      if (fresh) c.ys.clear();
      c.ys.push_back(parse_number(val, key));
    } else if (key == "delta") {
      if (fresh) c.deltas.clear();
      c.deltas.push_back(parse_number(val, key));
    } else if (key == "eps") {
      if (fresh) c.eps.clear();
      c.eps.push_back(parse_number(val, key));
    } else if (key == "level") {
      if (fresh) c.levels.clear();
      c.levels.push_back(parse_pair(val, key));
    } else if (key == "check") {
      if (fresh) c.checks.clear();
      c.checks.push_back(val);
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(parse_number(val, key));
    } else if (key == "dt") {
      c.sim.dt = parse_number(val, key);
    } else if (key == "horizon") {
      c.sim.horizon = parse_number(val, key);
    } else if (key == "n_paths") {
      c.sim.n_paths = static_cast<std::int64_t>(parse_number(val, key));
    } else if (key == "boundary_cutoff") {
      c.sim.boundary_cutoff = parse_number(val, key);
    } else if (key == "workers") {
      c.sim.workers = static_cast<int>(parse_number(val, key));
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else {
      const auto it = c.values.find(key);
      if (it == c.values.end()) {
        raise(ErrorKind::ConfigError, "unknown key '" + key + "' for suite " + to_string(suite));
      }
      auto& list = it->second;
      if (fresh) list.clear();
      list.push_back(parse_number(val, key));
    }
  }
  c.validate();
  return c;
}

SuiteConfig load_config(const std::string& path, Suite suite) {
  std::ifstream f(path);
  if (!f) raise(ErrorKind::ConfigError, "cannot open config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), suite);
}

}  // namespace stablecond
