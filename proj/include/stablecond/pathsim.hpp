#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "stablecond/harmonic.hpp"
#include "stablecond/hitting_laws.hpp"
#include "stablecond/tables.hpp"

namespace stablecond {

struct PathSample {
  std::vector<double> times;
  std::vector<double> positions;
  bool killed = false;
  std::optional<std::size_t> kill_index;
  bool truncated = false;
};

struct SimConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  std::int64_t n_paths = 10000;
  RngStream rng{0, 0};
  double boundary_cutoff = 1e-4;
  int workers = 0;  // 0: STABLECOND_WORKERS or hardware concurrency

  void validate() const;
};

struct EstimateWithCI {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

// Welford accumulator; merge() is Chan's pairwise update.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  EstimateWithCI estimate() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

int resolve_workers(int requested);

// Runs body(path_index, rng, out) for every path, each with its own
// substream of c.rng, and accumulates out[0..n_outputs) per output. Chunks are
// reduced in a fixed order, so results do not depend on the worker count.
std::vector<RunningStats> run_paths(std::int64_t n_paths, int n_outputs, const SimConfig& c,
                                    const std::function<void(std::int64_t, RngStream&, double*)>& body);

// Union of two closed intervals, one on each side of [-1, 1].
struct ExitDomain {
  double neg_lo, neg_hi, pos_lo, pos_hi;

  ExitDomain(double neg_lo_, double neg_hi_, double pos_lo_, double pos_hi_);
  bool contains(double y) const {
    return (y >= neg_lo && y <= neg_hi) || (y >= pos_lo && y <= pos_hi);
  }
};

using Payoff = std::function<double(double)>;

PathSample simulate_killed_path(const StableParams& p, ExteriorPoint x, const SimConfig& c);

// E^x[payoff(xi_t) h(xi_t); t < T] / h(x), where T is the first grid time with
// |xi| < barrier (barrier = 1 gives the closed interval [-1, 1]).
EstimateWithCI weighted_time_t_estimator(const StableParams& p, ExteriorPoint x, double t,
                                         HarmonicKind h_kind, const Payoff& payoff,
                                         const SimConfig& c, double barrier = 1.0);

// E^x[h(xi at exit from K); exit before entering [-1, 1]] / h(x).
EstimateWithCI weighted_exit_estimator(const StableParams& p, ExteriorPoint x, const ExitDomain& k,
                                       HarmonicKind h_kind, const SimConfig& c);

// Weighted exit estimates for several functions h on the same paths, at step
// dt and at step 2 dt (the coarse path sums consecutive pairs of fine
// increments). Each h is normalized by its value at x.
struct ExitStudy {
  std::vector<EstimateWithCI> fine;
  std::vector<EstimateWithCI> coarse;
  std::vector<EstimateWithCI> difference;  // fine - coarse, path by path
  std::int64_t truncated = 0;
};
ExitStudy weighted_exit_study(const StableParams& p, double x, const ExitDomain& k,
                              const std::vector<Payoff>& h, const SimConfig& c);

// Signed grid position of least absolute value.
double empirical_closest_reach(const PathSample& path);

enum class ConditioningKind {
  CLOSEST_REACH_WINDOW,       // closest reach in the window, alpha < 1
  ENTRANCE_WINDOW,            // position at first entrance into (-(1+eps), 1+eps), alpha >= 1
  CIRC_CLOSEST_REACH_WINDOW,  // closest reach under the avoid-zero transform, alpha > 1
};

// The window is (1, 1+eps) for POSITIVE; BOTH takes |.| in (1, 1+eps).
struct Conditioning {
  ConditioningKind kind;
  double eps;
  WindowSide side = WindowSide::POSITIVE;
};

// Rejection estimate of P^x(event(xi_t), t < T_{(-(1+delta), 1+delta)} | E)
// where E is the conditioning event (under the avoid-zero transform for the
// CIRC kind, realized by weights e(xi_H) / e(x)). Paths run to c.horizon;
// whatever is still undecided there is accepted with the exact conditional
// probability of E given the path so far.
EstimateWithCI conditional_law_estimator(const StableParams& p, ExteriorPoint x, double t,
                                         const Payoff& event, const Conditioning& cond,
                                         double delta, const SimConfig& c);

// The same estimator for a ladder of eps values on common paths and common
// acceptance uniforms.
std::vector<EstimateWithCI> conditional_law_ladder(const StableParams& p, double x, double t,
                                                   const Payoff& event, ConditioningKind kind,
                                                   WindowSide side, const std::vector<double>& eps,
                                                   double delta, const SimConfig& c,
                                                   std::int64_t min_accepted = 100);

// Approximate sample of the h-transformed (conditioned) process.
struct DoobChainOptions {
  // Steps grow as dt * max(1, dist^alpha / far_scale) with dist the distance
  // to [-1, 1]; far_scale <= 0 keeps the step fixed.
  double far_scale = 1.0;
  // Below this many step scales from [-1, 1] the kernel is tabulated on a
  // grid; further out it is sampled by rejection from the free increment.
  double grid_band = 20.0;
  // A grid step kills with the mass deficit 1 - m once it exceeds this.
  double kill_threshold = 1e-3;
  bool record_path = true;
};

class DoobChainSampler {
 public:
  DoobChainSampler(const StableParams& p, HarmonicKind kind, const SimConfig& c,
                   const DoobChainOptions& opt = {});
  DoobChainSampler(const StableDensity& density, HarmonicKind kind, const SimConfig& c,
                   const DoobChainOptions& opt = {});

  // One chain from x up to c.horizon, drawing from rng.
  PathSample sample(double x, RngStream& rng) const;
  const HarmonicTable& table() const { return h_; }

 private:
  struct Move {
    double y;
    int absorbed;  // 0 moved; +-1 killed at that boundary point
  };
  Move step(double x, double tau, RngStream& rng) const;
  Move grid_step(double x, double s, double hx, RngStream& rng) const;
  Move rejection_step(double x, double s, double hx, RngStream& rng) const;

  StableParams p_;
  HarmonicKind kind_;
  SimConfig c_;
  DoobChainOptions opt_;
  StableDensity density_;
  HarmonicTable h_;
  IncrementSampler sampler_;
};

PathSample simulate_doob_chain(const StableParams& p, ExteriorPoint x, HarmonicKind h_kind,
                               const SimConfig& c, const DoobChainOptions& opt = {});

// Position just before killing of a killed Doob chain.
double terminal_position(const PathSample& path);

}  // namespace stablecond
