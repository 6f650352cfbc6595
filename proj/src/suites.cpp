#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "stablecond/errors.hpp"
#include "stablecond/experiments.hpp"

namespace stablecond {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string tag(const StableParams& p) { return "a" + num(p.alpha) + "_r" + num(p.rho); }

std::string tag(const StableParams& p, double x) { return tag(p) + "/x" + num(x); }

CheckResult make_row(const std::string& id, const StableParams& p, double x, double eps) {
  CheckResult r;
  r.check_id = id;
  r.alpha = p.alpha;
  r.rho = p.rho;
  r.x = x;
  r.eps_or_delta = eps;
  return r;
}

CheckResult judged(CheckResult r, double expected, double observed, double tolerance,
                   ToleranceRule rule, double std_error = 0.0) {
  r.expected = expected;
  r.observed = observed;
  r.tolerance = tolerance;
  r.rule = rule;
  r.std_error = std_error;
  r.judge();
  return r;
}

void add(std::vector<CheckTask>& tasks, const std::string& id, const StableParams& p, double x,
         double eps, std::function<std::vector<CheckResult>(const SimConfig&)> run) {
  tasks.push_back(CheckTask{id, make_row(id, p, x, eps), std::move(run)});
}

double binomial_se(double f, double n) { return n > 0 ? std::sqrt(f * (1.0 - f) / n) : 0.0; }

// ---------------------------------------------------------------- identity

void plan_identity(const SuiteConfig& cfg, std::vector<CheckTask>& tasks) {
  const double tol = cfg.get("tol.identity", 1e-8);
  const double tol_green = cfg.get("tol.green_ratio", 1e-3);
  const double floor = cfg.get("tol.green_floor", 1e-7);
  for (const auto& p : cfg.params) {
    for (double x : cfg.points) {
      if (cfg.enabled("boundary_identity")) {
        for (double y : cfg.ys) {
          if (!(x > y || x < -1.0)) continue;  // the identity needs x > y > 1 or x < -1
          const std::string id = "boundary_identity/" + tag(p, x) + "/y" + num(y);
          add(tasks, id, p, x, y, [=](const SimConfig&) {
            const double v = v1(p, ExteriorPoint(x));
            auto r = make_row(id, p, x, y);
            return std::vector<CheckResult>{judged(r, 0.0, lemma31_residual(p, ExteriorPoint(x), y),
                                                   tol * std::max(1.0, v), ToleranceRule::ABS)};
          });
        }
      }
      if (cfg.enabled("green_ratio")) {
        const std::string id = "green_ratio/" + tag(p, x);
        auto deltas = cfg.deltas;
        std::sort(deltas.rbegin(), deltas.rend());
        add(tasks, id, p, x, deltas.back(), [=](const SimConfig&) {
          const double v = v1(p, ExteriorPoint(x));
          std::vector<CheckResult> rows;
          std::vector<double> errs;
          double last = 0.0;
          for (double d : deltas) {
            last = green_boundary_ratio(p, ExteriorPoint(x), d);
            errs.push_back(std::fabs(last - v) / v);
            rows.push_back(judged(make_row(id + "/d" + num(d), p, x, d), v, last, 0.0,
                                  ToleranceRule::INFO));
          }
          rows.push_back(
              judged(make_row(id + "/gate", p, x, deltas.back()), v, last, tol_green, ToleranceRule::REL));
          double violations = 0;
          for (std::size_t k = 1; k < errs.size(); ++k) {
            if (errs[k] > errs[k - 1] && errs[k] > floor) violations += 1;
          }
          auto decay = judged(make_row(id + "/decay", p, x, deltas.back()), 0.0, violations, 0.0,
                              ToleranceRule::ABS);
          decay.reason = "count of ladder steps where the error grows above " + num(floor);
          rows.push_back(decay);
          return rows;
        });
      }
    }
  }
}

// ------------------------------------------------------------- asymptotics

void plan_asymptotics(const SuiteConfig& cfg, std::vector<CheckTask>& tasks) {
  const double tol = cfg.get("tol.ratio", 1e-3);
  const double tol_norm = cfg.get("tol.normalization", 1e-8);
  const double tol_slope = cfg.get("tol.slope", 0.1);
  for (const auto& p : cfg.params) {
    for (double x : cfg.points) {
      const ExteriorPoint xe(x);
      if (p.alpha < 1.0 && cfg.enabled("closest_reach")) {
        for (double e : cfg.get_list("eps.closest_reach", {1e-5})) {
          const std::string id = "closest_reach/" + tag(p, x) + "/e" + num(e);
          add(tasks, id, p, x, e, [=](const SimConfig&) {
            const double m = closest_reach_mass(p, xe, HittingWindow(1.0, 1.0 + e, WindowSide::POSITIVE));
            const double a = closest_reach_asymptote(p, xe, WindowSide::POSITIVE);
            return std::vector<CheckResult>{
                judged(make_row(id, p, x, e), a, m / e, tol, ToleranceRule::REL)};
          });
        }
      }
      if (p.alpha >= 1.0 && cfg.enabled("entrance")) {
        for (double e : cfg.get_list("eps.entrance", {1e-4})) {
          const std::string id = "entrance/" + tag(p, x) + "/e" + num(e);
          add(tasks, id, p, x, e, [=](const SimConfig&) {
            const double m = entrance_window_mass(p, xe, e, WindowSide::POSITIVE);
            const double a = entrance_asymptote(p, xe, WindowSide::POSITIVE);
            return std::vector<CheckResult>{judged(make_row(id, p, x, e), a,
                                                   std::pow(e, p.alpha_rho_hat() - 1.0) * m, tol,
                                                   ToleranceRule::REL)};
          });
        }
      }
      if (p.alpha >= 1.0 && cfg.enabled("circ")) {
        for (double e : cfg.get_list("eps.circ", {1e-5})) {
          const std::string id = "circ/" + tag(p, x) + "/e" + num(e);
          add(tasks, id, p, x, e, [=](const SimConfig&) {
            const double m = circ_closest_reach_mass(
                p, xe, HittingWindow(1.0, 1.0 + e, WindowSide::POSITIVE), HarmonicKind::V1);
            const double a = 0.5 * (p.alpha - 1.0) * v1(p, xe);
            return std::vector<CheckResult>{judged(make_row(id, p, x, e), a,
                                                   avoid_zero_e(p, x) / e * m, tol,
                                                   ToleranceRule::REL)};
          });
        }
      }
      if (cfg.enabled("normalization")) {
        if (p.alpha < 1.0) {
          const std::string id = "normalization/closest_reach/" + tag(p, x);
          add(tasks, id, p, x, 0.0, [=](const SimConfig&) {
            const double m =
                closest_reach_mass(p, xe, HittingWindow(0.0, std::fabs(x), WindowSide::BOTH));
            return std::vector<CheckResult>{
                judged(make_row(id, p, x, 0.0), 1.0, m, tol_norm, ToleranceRule::ABS)};
          });
        } else {
          const std::string id = "normalization/entrance/" + tag(p, x);
          add(tasks, id, p, x, 0.0, [=](const SimConfig&) {
            return std::vector<CheckResult>{judged(make_row(id, p, x, 0.0), 1.0,
                                                   first_entrance_total_mass(p, x), tol_norm,
                                                   ToleranceRule::ABS)};
          });
        }
        if (p.alpha > 1.0) {
          const std::string id = "normalization/circ/" + tag(p, x);
          add(tasks, id, p, x, 0.0, [=](const SimConfig&) {
            return std::vector<CheckResult>{judged(make_row(id, p, x, 0.0), 1.0,
                                                   circ_closest_reach_total_mass(p, xe), tol_norm,
                                                   ToleranceRule::ABS)};
          });
        }
      }
      if (p.alpha >= 1.0 && cfg.enabled("side_selection")) {
        const auto eps = cfg.get_list("eps.side_selection", {1e-2, 1e-3, 1e-4});
        const std::string id = "side_selection/" + tag(p, x);
        add(tasks, id, p, x, eps.back(), [=](const SimConfig&) {
          if (p.rho == 0.5) raise(ErrorKind::ScopeError, "no side preference at rho = 1/2");
          if (eps.size() < 2) raise(ErrorKind::ConfigError, "slope needs two eps values");
          // Least-squares slope of log(NEGATIVE / POSITIVE) against log eps.
          double sx = 0, sy = 0, sxx = 0, sxy = 0;
          const double n = static_cast<double>(eps.size());
          std::vector<CheckResult> rows;
          for (double e : eps) {
            const double r = entrance_window_mass(p, xe, e, WindowSide::NEGATIVE) /
                             entrance_window_mass(p, xe, e, WindowSide::POSITIVE);
            rows.push_back(judged(make_row(id + "/e" + num(e), p, x, e), 0.0, r, 0.0,
                                  ToleranceRule::INFO));
            const double lx = std::log(e), ly = std::log(r);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
          }
          const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
          rows.push_back(judged(make_row(id + "/slope", p, x, eps.back()),
                                p.alpha * (p.rho_hat - p.rho), slope, tol_slope, ToleranceRule::REL));
          return rows;
        });
      }
    }
  }
}

// ------------------------------------------------------------- harmonicity

void plan_harmonicity(const SuiteConfig& cfg, std::vector<CheckTask>& tasks) {
  const double k_in = cfg.get("k.inner", 1.2), k_out = cfg.get("k.outer", 3.0);
  const double n_se = cfg.get("tol.se", 3.0), drift = cfg.get("tol.drift", 0.02);
  const auto times = cfg.get_list("time", {0.1, 0.5});
  const double dt_exc = cfg.get("dt.excessive", 1e-3);
  const auto n_exc = static_cast<std::int64_t>(cfg.get("n_paths.excessive", 20000));
  const bool exit_on = cfg.enabled("exit"), control_on = cfg.enabled("negative_control");
  for (const auto& p : cfg.params) {
    for (double x : cfg.points) {
      if (exit_on || control_on) {
        const std::string id = "exit/" + tag(p, x);
        add(tasks, id, p, x, 0.0, [=](const SimConfig& c) {
          const ExitDomain k(-k_out, -k_in, k_in, k_out);
          const HarmonicKind kinds[] = {HarmonicKind::V1, HarmonicKind::VMINUS1, HarmonicKind::V};
          std::vector<Payoff> h;
          for (auto kind : kinds) {
            h.push_back([p, kind](double y) { return evaluate_harmonic(p, kind, y); });
          }
          h.push_back([](double) { return 1.0; });
          const auto study = weighted_exit_study(p, x, k, h, c);
          std::vector<CheckResult> rows;
          const std::string note =
              study.truncated ? num(static_cast<double>(study.truncated)) + " paths truncated" : "";
          if (exit_on) {
            for (std::size_t i = 0; i < 3; ++i) {
              const auto& f = study.fine[i];
              const std::string kid = id + "/" + to_string(kinds[i]);
              auto r = judged(make_row(kid, p, x, c.dt), 1.0, f.value, n_se * f.std_error,
                              ToleranceRule::ABS, f.std_error);
              r.reason = note;
              rows.push_back(r);
              const auto& d = study.difference[i];
              auto dr = judged(make_row(kid + "/drift", p, x, c.dt), 0.0, d.value,
                               drift * std::fabs(f.value), ToleranceRule::ABS, d.std_error);
              dr.reason = "fine minus doubled-step estimate";
              rows.push_back(dr);
            }
          }
          if (control_on) {
            const auto& f = study.fine[3];
            auto r = judged(make_row("negative_control/" + tag(p, x), p, x, c.dt), 1.0, f.value,
                            n_se * f.std_error, ToleranceRule::OUTSIDE, f.std_error);
            r.reason = "h = 1 must fail the exit identity";
            rows.push_back(r);
          }
          return rows;
        });
      }
      for (double t : times) {
        if (cfg.enabled("excessive")) {
          const std::string id = "excessive/" + tag(p, x) + "/t" + num(t);
          add(tasks, id, p, x, dt_exc, [=](const SimConfig& c0) {
            SimConfig c = c0;
            c.dt = dt_exc;
            c.horizon = t;
            c.n_paths = n_exc;
            std::vector<CheckResult> rows;
            for (auto kind : {HarmonicKind::V1, HarmonicKind::V}) {
              c.rng = c0.rng.substream(static_cast<std::uint64_t>(kind));
              const auto e = weighted_time_t_estimator(p, ExteriorPoint(x), t, kind,
                                                       [](double) { return 1.0; }, c);
              rows.push_back(judged(make_row(id + "/" + to_string(kind), p, x, dt_exc), 1.0,
                                    e.value, n_se * e.std_error, ToleranceRule::UPPER, e.std_error));
            }
            return rows;
          });
        }
        if (cfg.enabled("invariant")) {
          const std::string id = "invariant/" + tag(p, x) + "/t" + num(t);
          add(tasks, id, p, x, dt_exc, [=](const SimConfig& c0) {
            SimConfig c = c0;
            c.dt = dt_exc;
            c.horizon = t;
            c.n_paths = n_exc;
            const auto e = weighted_time_t_estimator(p, ExteriorPoint(x), t, HarmonicKind::H,
                                                     [](double) { return 1.0; }, c);
            return std::vector<CheckResult>{judged(make_row(id, p, x, dt_exc), 1.0, e.value,
                                                   n_se * e.std_error, ToleranceRule::ABS,
                                                   e.std_error)};
          });
        }
      }
    }
  }
}

// -------------------------------------------------------------- absorption

struct ChainStats {
  double n = 0, killed = 0, in_window = 0, negative = 0, positive = 0;
  // Chains started at +x only.
  double killed_plus = 0, positive_plus = 0;
};

// Chains from x (alternating with -x when symmetric) under kind.
ChainStats run_chains(const StableParams& p, HarmonicKind kind, double x, bool symmetric,
                      double width, const SimConfig& c) {
  DoobChainOptions opt;
  opt.record_path = true;
  const DoobChainSampler sampler(p, kind, c, opt);
  const auto stats = run_paths(c.n_paths, 6, c, [&](std::int64_t i, RngStream& rng, double* out) {
    const double start = symmetric && (i % 2 == 1) ? -x : x;
    const auto path = sampler.sample(start, rng);
    std::fill(out, out + 6, 0.0);
    if (!path.killed) return;
    out[0] = 1.0;
    const double y = terminal_position(path);
    if (y > 1.0 && y < 1.0 + width) out[1] = 1.0;
    if (y < 0.0) out[2] = 1.0;
    if (y > 0.0) out[3] = 1.0;
    if (start == x) {
      out[4] = 1.0;
      out[5] = out[3];
    }
  });
  ChainStats s;
  s.n = static_cast<double>(c.n_paths);
  s.killed = stats[0].mean() * s.n;
  s.in_window = stats[1].mean() * s.n;
  s.negative = stats[2].mean() * s.n;
  s.positive = stats[3].mean() * s.n;
  s.killed_plus = stats[4].mean() * s.n;
  s.positive_plus = stats[5].mean() * s.n;
  return s;
}

void plan_absorption(const SuiteConfig& cfg, std::vector<CheckTask>& tasks) {
  const double killed_min = cfg.get("tol.killed", 0.99);
  const double window_min = cfg.get("tol.window", 0.95);
  const double width = cfg.get("window.width", 0.1);
  const double n_se = cfg.get("tol.se", 3.0);
  const auto n_surv = static_cast<std::int64_t>(cfg.get("n_paths.survival", 10000));
  const auto n_split = static_cast<std::int64_t>(cfg.get("n_paths.split", 2000));
  auto levels = cfg.levels;
  // Coarse to fine.
  std::sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  });
  const bool killed_on = cfg.enabled("killed"), window_on = cfg.enabled("terminal_window"),
             refine_on = cfg.enabled("refinement"), side_on = cfg.enabled("one_sided");
  for (const auto& p : cfg.params) {
    for (double x : cfg.points) {
      if (killed_on || window_on || refine_on || side_on) {
        const std::string id = "chain/" + tag(p, x);
        add(tasks, id, p, x, levels.back().second, [=](const SimConfig& c0) {
          std::vector<CheckResult> rows;
          std::vector<ChainStats> per_level;
          for (std::size_t l = 0; l < levels.size(); ++l) {
            SimConfig c = c0;
            c.dt = levels[l].first;
            c.boundary_cutoff = levels[l].second;
            c.rng = c0.rng.substream(l);
            per_level.push_back(run_chains(p, HarmonicKind::V1, x, false, width, c));
            const auto& s = per_level.back();
            const double f = s.killed > 0 ? s.in_window / s.killed : 0.0;
            const std::string lid = "terminal_window/" + tag(p, x) + "/dt" + num(c.dt) + "_cut" +
                                    num(c.boundary_cutoff);
            rows.push_back(judged(make_row(lid, p, x, c.boundary_cutoff), window_min, f, 0.0,
                                  ToleranceRule::INFO, binomial_se(f, s.killed)));
          }
          const auto& fine = per_level.back();
          const double cut = levels.back().second;
          const double killed = fine.killed / fine.n;
          const double in_fine = fine.killed > 0 ? fine.in_window / fine.killed : 0.0;
          if (killed_on) {
            rows.push_back(judged(make_row("killed/" + tag(p, x), p, x, cut), killed_min, killed,
                                  0.0, ToleranceRule::LOWER, binomial_se(killed, fine.n)));
            // The same quantity from the weighted estimator of the survival
            // probability at the horizon.
            SimConfig c = c0;
            c.dt = levels.back().first;
            c.n_paths = n_surv;
            c.rng = c0.rng.substream(1000);
            const auto surv = weighted_time_t_estimator(p, ExteriorPoint(x), c.horizon,
                                                        HarmonicKind::V1,
                                                        [](double) { return 1.0; }, c);
            const double se = std::hypot(binomial_se(killed, fine.n), surv.std_error);
            auto r = judged(make_row("killed_vs_weighted/" + tag(p, x), p, x, cut),
                            1.0 - surv.value, killed, n_se * se, ToleranceRule::ABS, se);
            r.reason = "expected is 1 - weighted survival probability at the horizon";
            rows.push_back(r);
          }
          if (window_on) {
            rows.push_back(judged(make_row("terminal_window/" + tag(p, x), p, x, cut), window_min,
                                  in_fine, 0.0, ToleranceRule::LOWER,
                                  binomial_se(in_fine, fine.killed)));
          }
          if (refine_on && per_level.size() >= 2) {
            const auto& coarse = per_level[per_level.size() - 2];
            const double in_coarse = coarse.killed > 0 ? coarse.in_window / coarse.killed : 0.0;
            const double se = std::hypot(binomial_se(in_fine, fine.killed),
                                         binomial_se(in_coarse, coarse.killed));
            rows.push_back(judged(make_row("refinement/" + tag(p, x), p, x, cut), 0.0,
                                  in_fine - in_coarse, 0.0, ToleranceRule::LOWER, se));
          }
          if (side_on) {
            const double neg = fine.killed > 0 ? fine.negative / fine.killed : 0.0;
            auto r = judged(make_row("one_sided/" + tag(p, x), p, x, cut), 0.0, neg, 0.0,
                            ToleranceRule::ABS, binomial_se(neg, fine.killed));
            r.reason = "fraction of killed chains ending on the negative side";
            rows.push_back(r);
          }
          return rows;
        });
      }
      if (cfg.enabled("split")) {
        const std::string id = "split/" + tag(p, x);
        add(tasks, id, p, x, levels.back().second, [=](const SimConfig& c0) {
          if (p.rho != 0.5) raise(ErrorKind::ScopeError, "the split is only symmetric at rho = 1/2");
          SimConfig c = c0;
          c.dt = levels.back().first;
          c.boundary_cutoff = levels.back().second;
          c.n_paths = n_split;
          const auto s = run_chains(p, HarmonicKind::V, std::fabs(x), true, width, c);
          const double f = s.killed > 0 ? s.positive / s.killed : 0.0;
          const double se = binomial_se(0.5, s.killed);
          auto r = judged(make_row(id, p, x, c.boundary_cutoff), 0.5, f, n_se * se,
                          ToleranceRule::ABS, se);
          r.reason = "chains start at +x and -x in equal numbers";
          // From +x alone the side law is v1(x)/v(x). Reported only: chains
          // still alive at the horizon are not a side-neutral sample.
          const double fp = s.killed_plus > 0 ? s.positive_plus / s.killed_plus : 0.0;
          const double v1x = v1(p, ExteriorPoint(std::fabs(x)));
          auto rp = judged(make_row("split_from_x/" + tag(p, std::fabs(x)), p, std::fabs(x),
                                    c.boundary_cutoff),
                           v1x / v_total(p, ExteriorPoint(std::fabs(x))), fp, 0.0,
                           ToleranceRule::INFO, binomial_se(fp, s.killed_plus));
          return std::vector<CheckResult>{r, rp};
        });
      }
    }
  }
}

// ------------------------------------------------------------ conditioning

void plan_conditioning(const SuiteConfig& cfg, std::vector<CheckTask>& tasks) {
  const double t = cfg.get("time", 0.5);
  const double level = cfg.get("event.level", 2.0);
  const double factor = cfg.get("horizon.factor", 2.0);
  const auto n_weighted = static_cast<std::int64_t>(cfg.get("n_paths.weighted", 200000));
  const auto n_circ = static_cast<std::int64_t>(cfg.get("n_paths.circ", 40000));
  const auto min_acc = static_cast<std::int64_t>(cfg.get("min_accepted", 100));
  const double n_se = cfg.get("tol.se", 3.0);
  const double delta = cfg.deltas.front();
  auto eps = cfg.eps;
  std::sort(eps.rbegin(), eps.rend());

  struct Family {
    const char* name;
    ConditioningKind kind;
    WindowSide side;
    bool (*applies)(const StableParams&);
  };
  const Family families[] = {
      {"closest_reach", ConditioningKind::CLOSEST_REACH_WINDOW, WindowSide::POSITIVE,
       [](const StableParams& p) { return p.alpha < 1.0; }},
      {"closest_reach", ConditioningKind::CLOSEST_REACH_WINDOW, WindowSide::BOTH,
       [](const StableParams& p) { return p.alpha < 1.0; }},
      {"entrance", ConditioningKind::ENTRANCE_WINDOW, WindowSide::POSITIVE,
       [](const StableParams& p) { return p.alpha >= 1.0; }},
      {"circ", ConditioningKind::CIRC_CLOSEST_REACH_WINDOW, WindowSide::POSITIVE,
       [](const StableParams& p) { return p.alpha > 1.0; }},
      {"circ", ConditioningKind::CIRC_CLOSEST_REACH_WINDOW, WindowSide::BOTH,
       [](const StableParams& p) { return p.alpha > 1.0; }},
  };
  for (const auto& p : cfg.params) {
    for (double x : cfg.points) {
      for (const auto& fam : families) {
        if (!fam.applies(p) || !cfg.enabled(fam.name)) continue;
        const std::string id =
            std::string(fam.name) + "/" + to_string(fam.side) + "/" + tag(p, x);
        const bool circ = fam.kind == ConditioningKind::CIRC_CLOSEST_REACH_WINDOW;
        add(tasks, id, p, x, eps.back(), [=](const SimConfig& c0) {
          const Payoff event = [level](double y) { return y > level ? 1.0 : 0.0; };
          SimConfig cw = c0;
          cw.horizon = t;
          cw.n_paths = n_weighted;
          cw.rng = c0.rng.substream(1);
          const auto w = weighted_time_t_estimator(p, ExteriorPoint(x), t, limit_harmonic(fam.side),
                                                   event, cw, 1.0 + delta);
          SimConfig cc = c0;
          cc.horizon = factor * t;
          if (circ) cc.n_paths = n_circ;
          cc.rng = c0.rng.substream(2);
          const auto ladder =
              conditional_law_ladder(p, x, t, event, fam.kind, fam.side, eps, delta, cc, min_acc);
          std::vector<CheckResult> rows;
          std::vector<double> gaps, ses;
          for (std::size_t k = 0; k < eps.size(); ++k) {
            const double bound = conditioning_bias_bound(p, x, fam.kind, fam.side, eps[k], level);
            const double budget = bound * w.value;
            const double se = std::hypot(w.std_error, ladder[k].std_error);
            const std::string eid = id + "/e" + num(eps[k]);
            auto r = judged(make_row(eid, p, x, eps[k]), w.value, ladder[k].value,
                            n_se * se + budget, ToleranceRule::ABS, se);
            r.reason = "accepted " + num(static_cast<double>(ladder[k].n)) +
                       "; bias budget " + num(budget);
            rows.push_back(r);
            gaps.push_back(ladder[k].value - w.value);
            ses.push_back(ladder[k].std_error);
          }
          // The gap may not grow along the ladder by more than the noise of
          // the two conditional estimates.
          double worst = -INFINITY, worst_tol = 0.0;
          for (std::size_t k = 1; k < gaps.size(); ++k) {
            const double growth = std::fabs(gaps[k]) - std::fabs(gaps[k - 1]);
            const double tol = n_se * std::hypot(ses[k], ses[k - 1]);
            if (growth - tol > worst - worst_tol) {
              worst = growth;
              worst_tol = tol;
            }
          }
          if (gaps.size() >= 2) {
            auto r = judged(make_row(id + "/shrink", p, x, eps.back()), 0.0, worst, worst_tol,
                            ToleranceRule::UPPER);
            r.reason = "largest growth of |gap| between consecutive eps";
            rows.push_back(r);
          }
          return rows;
        });
      }
    }
  }
}

}  // namespace

std::vector<CheckTask> plan_suite(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<CheckTask> tasks;
  switch (cfg.suite) {
    case Suite::IDENTITY: plan_identity(cfg, tasks); break;
    case Suite::ASYMPTOTICS: plan_asymptotics(cfg, tasks); break;
    case Suite::HARMONICITY_MC: plan_harmonicity(cfg, tasks); break;
    case Suite::ABSORPTION: plan_absorption(cfg, tasks); break;
    case Suite::CONDITIONING: plan_conditioning(cfg, tasks); break;
  }
  return tasks;
}

}  // namespace stablecond
