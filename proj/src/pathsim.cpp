#include "stablecond/pathsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "stablecond/errors.hpp"

namespace stablecond {

namespace {

constexpr std::int64_t kChunk = 256;

std::int64_t step_count(double t, double dt) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t / dt - 1e-9)));
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !(horizon > dt)) raise(ErrorKind::DomainError, "need 0 < dt < horizon");
  if (n_paths < 1) raise(ErrorKind::DomainError, "n_paths must be at least 1");
  if (!(boundary_cutoff > 0.0)) raise(ErrorKind::DomainError, "boundary_cutoff must be positive");
}

void RunningStats::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

EstimateWithCI RunningStats::estimate() const {
  return {mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STABLECOND_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<RunningStats> run_paths(
    std::int64_t n_paths, int n_outputs, const SimConfig& c,
    const std::function<void(std::int64_t, RngStream&, double*)>& body) {
  const std::int64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
  std::vector<std::vector<RunningStats>> partial(static_cast<std::size_t>(n_chunks),
                                                 std::vector<RunningStats>(n_outputs));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::vector<double> out(static_cast<std::size_t>(n_outputs));
    while (true) {
      const std::int64_t chunk = next.fetch_add(1);
      if (chunk >= n_chunks) return;
      auto& acc = partial[static_cast<std::size_t>(chunk)];
      const std::int64_t end = std::min(n_paths, (chunk + 1) * kChunk);
      try {
        for (std::int64_t i = chunk * kChunk; i < end; ++i) {
          RngStream rng = c.rng.substream(static_cast<std::uint64_t>(i));
          std::fill(out.begin(), out.end(), 0.0);
          body(i, rng, out.data());
          for (int k = 0; k < n_outputs; ++k) acc[k].add(out[k]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };
  const int workers = static_cast<int>(
      std::min<std::int64_t>(resolve_workers(c.workers), std::max<std::int64_t>(1, n_chunks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<RunningStats> total(static_cast<std::size_t>(n_outputs));
  for (const auto& acc : partial) {
    for (int k = 0; k < n_outputs; ++k) total[k].merge(acc[k]);
  }
  return total;
}

ExitDomain::ExitDomain(double a, double b, double c, double d)
    : neg_lo(a), neg_hi(b), pos_lo(c), pos_hi(d) {
  if (!(a <= b && b < -1.0 && 1.0 < c && c <= d)) {
    raise(ErrorKind::DomainError, "K must be [a,b] U [c,d] with a <= b < -1 < 1 < c <= d");
  }
}

PathSample simulate_killed_path(const StableParams& p, ExteriorPoint x, const SimConfig& c) {
  c.validate();
  const IncrementSampler sampler(p);
  const double scale = std::pow(c.dt, 1.0 / p.alpha);
  RngStream rng = c.rng;
  PathSample out;
  const std::int64_t n = step_count(c.horizon, c.dt);
  out.times.reserve(static_cast<std::size_t>(std::min<std::int64_t>(n + 1, 1 << 20)));
  out.positions.reserve(out.times.capacity());
  double pos = x.value();
  out.times.push_back(0.0);
  out.positions.push_back(pos);
  for (std::int64_t k = 1; k <= n; ++k) {
    pos += scale * sampler.unit(rng);
    out.times.push_back(static_cast<double>(k) * c.dt);
    out.positions.push_back(pos);
    if (std::fabs(pos) <= 1.0) {
      out.killed = true;
      out.kill_index = out.positions.size() - 1;
      return out;
    }
  }
  out.truncated = true;
  return out;
}

EstimateWithCI weighted_time_t_estimator(const StableParams& p, ExteriorPoint x, double t,
                                         HarmonicKind h_kind, const Payoff& payoff,
                                         const SimConfig& c, double barrier) {
  c.validate();
  if (!(t > 0.0) || t > c.horizon) raise(ErrorKind::DomainError, "need 0 < t <= horizon");
  if (h_kind == HarmonicKind::H && p.alpha <= 1.0) {
    raise(ErrorKind::ScopeError, "the invariant function needs alpha > 1");
  }
  if (!(barrier >= 1.0) || std::fabs(x.value()) < barrier) {
    raise(ErrorKind::DomainError, "start must lie outside the killing barrier");
  }
  const double hx = evaluate_harmonic(p, h_kind, x);
  const IncrementSampler sampler(p);
  const std::int64_t n = step_count(t, c.dt);
  const double scale = std::pow(c.dt, 1.0 / p.alpha);
  const double last_scale = std::pow(t - static_cast<double>(n - 1) * c.dt, 1.0 / p.alpha);
  auto stats = run_paths(c.n_paths, 1, c, [&](std::int64_t, RngStream& rng, double* out) {
    double pos = x.value();
    for (std::int64_t k = 1; k <= n; ++k) {
      pos += (k == n ? last_scale : scale) * sampler.unit(rng);
      if (std::fabs(pos) < barrier || std::fabs(pos) <= 1.0) return;
    }
    out[0] = payoff(pos) * evaluate_harmonic(p, h_kind, pos) / hx;
  });
  return stats[0].estimate();
}

ExitStudy weighted_exit_study(const StableParams& p, double x, const ExitDomain& k,
                              const std::vector<Payoff>& h, const SimConfig& c) {
  c.validate();
  if (!k.contains(x)) raise(ErrorKind::DomainError, "start point must lie in K");
  if (h.empty()) raise(ErrorKind::DomainError, "no functions to average");
  const int nk = static_cast<int>(h.size());
  std::vector<double> hx(h.size());
  for (int i = 0; i < nk; ++i) hx[i] = h[i](x);
  const IncrementSampler sampler(p);
  const double scale = std::pow(c.dt, 1.0 / p.alpha);
  const std::int64_t n = step_count(c.horizon, c.dt);
  // Outputs: fine[i], coarse[i], fine[i]-coarse[i] for each i, then truncation.
  auto stats = run_paths(c.n_paths, 3 * nk + 1, c, [&](std::int64_t, RngStream& rng, double* out) {
    double fine = x, coarse = x;
    bool fine_live = true, coarse_live = true;
    auto score = [&](double y, int offset) {
      if (std::fabs(y) <= 1.0) return;
      for (int i = 0; i < nk; ++i) out[3 * i + offset] = h[i](y) / hx[i];
    };
    for (std::int64_t s = 1; s <= n && (fine_live || coarse_live); ++s) {
      fine += scale * sampler.unit(rng);
      if (fine_live && !k.contains(fine)) {
        fine_live = false;
        score(fine, 0);
      }
      if (s % 2 == 0 && coarse_live) {
        coarse = fine;
        if (!k.contains(coarse)) {
          coarse_live = false;
          score(coarse, 1);
        }
      }
    }
    // The coarse path is the fine path sampled at even steps, so once the
    // fine path has exited the two differ and the coarse one is continued.
    for (int i = 0; i < nk; ++i) out[3 * i + 2] = out[3 * i] - out[3 * i + 1];
    out[3 * nk] = (fine_live || coarse_live) ? 1.0 : 0.0;
  });
  ExitStudy r;
  for (int i = 0; i < nk; ++i) {
    r.fine.push_back(stats[3 * i].estimate());
    r.coarse.push_back(stats[3 * i + 1].estimate());
    r.difference.push_back(stats[3 * i + 2].estimate());
  }
  r.truncated = static_cast<std::int64_t>(std::llround(stats[3 * nk].mean() * c.n_paths));
  return r;
}

EstimateWithCI weighted_exit_estimator(const StableParams& p, ExteriorPoint x, const ExitDomain& k,
                                       HarmonicKind h_kind, const SimConfig& c) {
  if (h_kind == HarmonicKind::H && p.alpha <= 1.0) {
    raise(ErrorKind::ScopeError, "the invariant function needs alpha > 1");
  }
  Payoff h = [&](double y) { return evaluate_harmonic(p, h_kind, y); };
  return weighted_exit_study(p, x.value(), k, {h}, c).fine[0];
}

double empirical_closest_reach(const PathSample& path) {
  if (path.killed) raise(ErrorKind::KilledPath, "a killed path has its closest reach inside [-1,1]");
  if (path.positions.empty()) raise(ErrorKind::DomainError, "empty path");
  double best = path.positions.front();
  for (double y : path.positions) {
    if (std::fabs(y) < std::fabs(best)) best = y;
  }
  return best;
}

std::vector<EstimateWithCI> conditional_law_ladder(const StableParams& p, double x, double t,
                                                   const Payoff& event, ConditioningKind kind,
                                                   WindowSide side, const std::vector<double>& eps,
                                                   double delta, const SimConfig& c,
                                                   std::int64_t min_accepted) {
  c.validate();
  const bool entrance = kind == ConditioningKind::ENTRANCE_WINDOW;
  const bool circ = kind == ConditioningKind::CIRC_CLOSEST_REACH_WINDOW;
  if (kind == ConditioningKind::CLOSEST_REACH_WINDOW && !(p.alpha < 1.0)) {
    raise(ErrorKind::ScopeError, "closest-reach conditioning needs alpha < 1");
  }
  if (entrance && !(p.alpha >= 1.0)) {
    raise(ErrorKind::ScopeError, "entrance-window conditioning needs alpha >= 1");
  }
  if (circ && !(p.alpha > 1.0)) {
    raise(ErrorKind::ScopeError, "closest reach under the avoid-zero transform needs alpha > 1");
  }
  if (side == WindowSide::NEGATIVE) {
    raise(ErrorKind::DomainError, "conditioning windows are POSITIVE or BOTH");
  }
  if (!(t > 0.0) || t > c.horizon) raise(ErrorKind::DomainError, "need 0 < t <= horizon");
  if (!(delta > 0.0) || std::fabs(x) <= 1.0 + delta) {
    raise(ErrorKind::DomainError, "start must lie outside (-(1+delta), 1+delta)");
  }
  for (double e : eps) {
    if (!(e > 0.0) || std::fabs(x) <= 1.0 + e) {
      raise(ErrorKind::DomainError, "start must lie outside (-(1+eps), 1+eps)");
    }
  }
  const bool both = side == WindowSide::BOTH;
  // Probability under the base measure that the closest reach from y lies in
  // the window (a, b) on the requested side(s).
  auto reach_mass = [&](double y, double a, double b, WindowSide s) {
    if (!(b > a)) return 0.0;
    const HittingWindow w(a, b, s);
    return circ ? circ_closest_reach_mass(p, ExteriorPoint(y), w,
                                          s == WindowSide::BOTH ? HarmonicKind::V : HarmonicKind::V1)
                : closest_reach_mass(p, ExteriorPoint(y), w);
  };
  const double ex = circ ? avoid_zero_e(p, x) : 1.0;
  const int ne = static_cast<int>(eps.size());
  const IncrementSampler sampler(p);
  const double scale = std::pow(c.dt, 1.0 / p.alpha);
  const std::int64_t nt = step_count(t, c.dt);
  const std::int64_t nh = std::max(nt, step_count(c.horizon, c.dt));
  // Per eps: acceptance weight D, D * event, D^2, D^2 * event (for the
  // ratio estimator's delta-method error).
  auto stats = run_paths(c.n_paths, 4 * ne, c, [&](std::int64_t, RngStream& rng, double* out) {
    const double u = rng.uniform();
    double pos = x;
    double closest_pos = x;
    bool band_free = true;  // no visit to (-(1+delta), 1+delta) up to t
    double lambda = 0.0;
    std::vector<int> decided(ne, 0);  // entrance window: 1 accept, -1 reject
    int open = ne;
    for (std::int64_t k = 1; k <= nh; ++k) {
      pos += scale * sampler.unit(rng);
      const double a = std::fabs(pos);
      if (k <= nt && a < 1.0 + delta) band_free = false;
      if (k == nt) lambda = band_free ? event(pos) : 0.0;
      if (!entrance) {
        if (a <= 1.0) return;  // closest reach inside [-1, 1]: rejected for every eps
        if (a < std::fabs(closest_pos)) closest_pos = pos;
      } else {
        for (int i = 0; i < ne; ++i) {
          if (decided[i] == 0 && a < 1.0 + eps[i]) {
            decided[i] = (pos > 1.0 || (both && pos < -1.0)) ? 1 : -1;
            --open;
          }
        }
        if (open == 0 && k >= nt) break;
      }
    }
    const double weight = circ ? avoid_zero_e(p, pos) / ex : 1.0;
    for (int i = 0; i < ne; ++i) {
      double q;
      if (!entrance) {
        // Exact probability that the closest reach of the whole path lands in
        // the window given the minimum so far and the current position.
        const double m = std::fabs(closest_pos), y = std::fabs(pos);
        const bool inside = m < 1.0 + eps[i] && (both || closest_pos > 0.0);
        if (inside) {
          q = reach_mass(pos, m, y, WindowSide::BOTH) + reach_mass(pos, 1.0, m, side);
        } else {
          q = reach_mass(pos, 1.0, std::min(1.0 + eps[i], m), side);
        }
      } else if (decided[i] != 0) {
        q = decided[i] > 0 ? 1.0 : 0.0;
      } else {
        const ExteriorPoint here(pos);
        q = entrance_window_mass(p, here, eps[i], WindowSide::POSITIVE);
        if (both) q += entrance_window_mass(p, here, eps[i], WindowSide::NEGATIVE);
      }
      const double d = u < q ? weight : 0.0;
      out[4 * i] = d;
      out[4 * i + 1] = d * lambda;
      out[4 * i + 2] = d * d;
      out[4 * i + 3] = d * d * lambda;
    }
  });
  std::vector<EstimateWithCI> r;
  const double n = static_cast<double>(c.n_paths);
  for (int i = 0; i < ne; ++i) {
    const double md = stats[4 * i].mean(), mn = stats[4 * i + 1].mean();
    const double md2 = stats[4 * i + 2].mean(), mnd = stats[4 * i + 3].mean();
    const double n_eff = md > 0.0 ? md * md / md2 * n : 0.0;  // equals the accepted count without weights
    const auto accepted = static_cast<std::int64_t>(std::llround(n_eff));
    if (accepted < min_accepted) {
      raise(ErrorKind::InsufficientAcceptance,
            "accepted " + std::to_string(accepted) + " paths at eps=" + std::to_string(eps[i]) +
                ", floor " + std::to_string(min_accepted));
    }
    const double v = mn / md;
    // With event indicator L and N = D L: E[N^2] = E[N D] = E[D^2 L].
    const double var = std::max(0.0, mnd - 2.0 * v * mnd + v * v * md2) / (n * md * md);
    r.push_back({v, std::sqrt(var), accepted});
  }
  return r;
}

EstimateWithCI conditional_law_estimator(const StableParams& p, ExteriorPoint x, double t,
                                         const Payoff& event, const Conditioning& cond,
                                         double delta, const SimConfig& c) {
  return conditional_law_ladder(p, x.value(), t, event, cond.kind, cond.side, {cond.eps}, delta,
                                c)
      .front();
}

double terminal_position(const PathSample& path) {
  if (!path.killed || !path.kill_index || *path.kill_index == 0) {
    raise(ErrorKind::DomainError, "path was not killed");
  }
  return path.positions[*path.kill_index - 1];
}

}  // namespace stablecond
