#include <algorithm>
#include <cmath>
#include <string>

#include "stablecond/errors.hpp"
#include "stablecond/pathsim.hpp"

namespace stablecond {

HarmonicTable::HarmonicTable(const StableParams& p, HarmonicKind kind, double min_offset,
                             double max_offset, double step)
    : kind_(kind) {
  if (kind == HarmonicKind::H && p.alpha <= 1.0) {
    raise(ErrorKind::ScopeError, "the invariant function needs alpha > 1");
  }
  if (!(min_offset > 0.0 && max_offset > min_offset && step > 0.0)) {
    raise(ErrorKind::DomainError, "bad harmonic table range");
  }
  const double d0 = std::log(min_offset);
  const int n = static_cast<int>(std::ceil((std::log(max_offset) - d0) / step)) + 1;
  for (int sign : {1, -1}) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double h = evaluate_harmonic_at_offset(p, kind, sign, std::exp(d0 + step * i));
      values[static_cast<std::size_t>(i)] = h > 0.0 ? std::log(h) : -745.0;
    }
    std::vector<double> suffix(values);
    for (int i = n - 2; i >= 0; --i) suffix[i] = std::max(suffix[i], suffix[i + 1]);
    if (sign > 0) {
      pos_ = UniformSpline(d0, step, std::move(values));
      pos_suffix_max_ = std::move(suffix);
    } else {
      neg_ = UniformSpline(d0, step, std::move(values));
      neg_suffix_max_ = std::move(suffix);
    }
  }
}

double HarmonicTable::log_value(double y) const {
  const double a = std::fabs(y) - 1.0;
  if (!(a > 0.0)) raise(ErrorKind::DomainError, "harmonic table needs |y| > 1");
  return y > 0.0 ? pos_(std::log(a)) : neg_(std::log(a));
}

double HarmonicTable::boundary_exponent(double y) const {
  const double a = std::fabs(y) - 1.0;
  if (!(a > 0.0)) raise(ErrorKind::DomainError, "harmonic table needs |y| > 1");
  const UniformSpline& s = y > 0.0 ? pos_ : neg_;
  const double d = std::log(a), e = 1e-3;
  return (s(d + e) - s(d - e)) / (2.0 * e);
}

double HarmonicTable::sup_beyond(int sign, double a) const {
  const UniformSpline& s = sign > 0 ? pos_ : neg_;
  const auto& suffix = sign > 0 ? pos_suffix_max_ : neg_suffix_max_;
  std::size_t i = 0;
  if (a > 0.0) {
    const double x = (std::log(a) - s.front()) / (s.back() - s.front()) *
                     static_cast<double>(suffix.size() - 1);
    if (x > 0.0) {
      i = std::min(suffix.size() - 1, static_cast<std::size_t>(std::floor(x)));
    }
  }
  // Margin for the variation between grid nodes.
  return std::exp(suffix[i]) * 1.001;
}

namespace {

struct Cell {
  double a, b;    // ends in the cell's own coordinate
  double ka, kb;  // density at the ends
  double mass;
  int zone;       // 0 ordinary; +-1 cutoff zone at that boundary point
  bool log_coord; // a, b are log offsets from the pole at sign 'zone_sign'
  int pole;       // boundary point owning a log-coordinate cell
};

// Draw t in [0, 1] from the density proportional to ka (1-t) + kb t.
double linear_draw(double ka, double kb, double v) {
  const double d = kb - ka;
  if (std::fabs(d) <= 1e-9 * (ka + kb)) return v;
  return (std::sqrt(ka * ka + (kb * kb - ka * ka) * v) - ka) / d;
}

}  // namespace

DoobChainSampler::DoobChainSampler(const StableParams& p, HarmonicKind kind, const SimConfig& c,
                                   const DoobChainOptions& opt)
    : DoobChainSampler(StableDensity(p), kind, c, opt) {}

DoobChainSampler::DoobChainSampler(const StableDensity& density, HarmonicKind kind,
                                   const SimConfig& c, const DoobChainOptions& opt)
    : p_(density.params()),
      kind_(kind),
      c_(c),
      opt_(opt),
      density_(density),
      h_(density.params(), kind),
      sampler_(density.params()) {
  c.validate();
  if (!(opt.kill_threshold > 0.0 && opt.kill_threshold < 1.0) || !(opt.grid_band > 0.0)) {
    raise(ErrorKind::DomainError, "bad Doob chain options");
  }
}

DoobChainSampler::Move DoobChainSampler::step(double x, double tau, RngStream& rng) const {
  const double s = std::pow(tau, 1.0 / p_.alpha);
  const double hx = h_(x);
  if (!(hx > 0.0) || !std::isfinite(hx)) {
    raise(ErrorKind::GridFailure, "h not positive at chain position " + std::to_string(x));
  }
  const double dist = std::fabs(x) - 1.0;
  if (kind_ == HarmonicKind::H || dist < opt_.grid_band * s) return grid_step(x, s, hx, rng);
  return rejection_step(x, s, hx, rng);
}

// The kernel p_tau(y - x) h(y) / h(x) on |y| > 1 + cutoff, integrated by the
// trapezoid rule on nodes that resolve both the increment scale s around x
// and the boundary behaviour of h at +-1.
DoobChainSampler::Move DoobChainSampler::grid_step(double x, double s, double hx,
                                                   RngStream& rng) const {
  const double c = c_.boundary_cutoff;
  const double reach = 1e4 + 10.0 * std::fabs(x);
  const double eta_max = std::asinh(reach / s);
  const double d_eta = 0.1;
  std::vector<double> pos, neg;
  pos.reserve(800);
  neg.reserve(800);
  auto add = [&](double y) {
    if (y > 1.0 + c) {
      pos.push_back(y);
    } else if (y < -1.0 - c) {
      neg.push_back(y);
    }
  };
  for (double eta = -eta_max; eta <= eta_max + 1e-12; eta += d_eta) add(x + s * std::sinh(eta));
  for (double u = c * 1.1; u < 2.0; u *= 1.1) {
    add(1.0 + u);
    add(-1.0 - u);
  }
  pos.push_back(1.0 + c);
  neg.push_back(-1.0 - c);
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  auto k = [&](double y) { return density_.pdf((y - x) / s) / s * h_(y) / hx; };

  std::vector<Cell> cells;
  cells.reserve(pos.size() + neg.size() + 2);
  double m = 0.0;
  for (int sign : {1, -1}) {
    const std::vector<double>& nodes = sign > 0 ? pos : neg;
    const double edge = sign * (1.0 + c);
    const double k_edge = k(edge);
    const double gamma = std::max(h_.boundary_exponent(edge), -1.0 + 1e-6);
    const double zone = k_edge * c / (gamma + 1.0);
    cells.push_back({0.0, 0.0, 0.0, 0.0, zone, sign, false, 0});
    m += zone;
    double prev_y = nodes.front(), prev_k = k(prev_y);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double y = nodes[i];
      if (y == prev_y) continue;
      const double ky = k(y);
      const double mass = 0.5 * (prev_k + ky) * (y - prev_y);
      cells.push_back({prev_y, y, prev_k, ky, mass, 0, false, 0});
      m += mass;
      prev_y = y;
      prev_k = ky;
    }
  }
  if (!(m > 0.0) || !std::isfinite(m)) {
    raise(ErrorKind::GridFailure, "kernel mass not resolvable at x=" + std::to_string(x));
  }
  const double deficit = 1.0 - m;
  if (deficit > opt_.kill_threshold && rng.uniform() < deficit) {
    return {x, x > 0.0 ? 1 : -1};
  }
  double w = rng.uniform() * m;
  for (const Cell& cell : cells) {
    if (w < cell.mass) {
      if (cell.zone != 0) return {x, cell.zone};
      const double t = linear_draw(cell.ka, cell.kb, rng.uniform());
      return {cell.a + t * (cell.b - cell.a), 0};
    }
    w -= cell.mass;
  }
  const Cell& last = cells.back();
  return {last.b, 0};
}

// Far from the boundary the kernel is split into pieces next to each pole of
// h, tabulated in log distance to the pole, and the rest, which is sampled
// exactly by thinning free increments with h(y) / M.
DoobChainSampler::Move DoobChainSampler::rejection_step(double x, double s, double hx,
                                                        RngStream& rng) const {
  const double c = c_.boundary_cutoff;
  int poles[2];
  int n_poles = 0;
  if (kind_ == HarmonicKind::V1 || kind_ == HarmonicKind::V) poles[n_poles++] = 1;
  if (kind_ == HarmonicKind::VMINUS1 || kind_ == HarmonicKind::V) poles[n_poles++] = -1;
  double reach[2] = {0.0, 0.0};  // near piece (1, 1 + reach) beyond each pole
  std::vector<Cell> cells;
  cells.reserve(70);
  double m_near = 0.0;
  constexpr int kNodes = 32;
  for (int j = 0; j < n_poles; ++j) {
    const int sign = poles[j];
    const double r = 0.5 * std::fabs(x - sign);
    reach[j] = r;
    auto k = [&](double u) {
      const double y = sign * (1.0 + u);
      return density_.pdf((y - x) / s) / s * h_(y) / hx;
    };
    const double gamma = std::max(h_.boundary_exponent(sign * (1.0 + c)), -1.0 + 1e-6);
    const double zone = k(c) * c / (gamma + 1.0);
    cells.push_back({0.0, 0.0, 0.0, 0.0, zone, sign, false, sign});
    m_near += zone;
    const double l0 = std::log(c), l1 = std::log(r);
    double prev_l = l0, prev_g = k(c) * c;  // density in log u is k(u) u
    for (int i = 1; i < kNodes; ++i) {
      const double l = l0 + (l1 - l0) * i / (kNodes - 1);
      const double g = k(std::exp(l)) * std::exp(l);
      const double mass = 0.5 * (prev_g + g) * (l - prev_l);
      cells.push_back({prev_l, l, prev_g, g, mass, 0, true, sign});
      m_near += mass;
      prev_l = l;
      prev_g = g;
    }
  }
  double bound = 0.0;
  for (int side : {1, -1}) {
    double a = 0.0;
    for (int j = 0; j < n_poles; ++j) {
      if (poles[j] == side) a = reach[j];
    }
    bound = std::max(bound, h_.sup_beyond(side, a));
  }
  const double bound_norm = bound / hx;
  auto in_near = [&](double y) {
    for (int j = 0; j < n_poles; ++j) {
      const double u = poles[j] * y - 1.0;
      if (u > 0.0 && u < reach[j]) return true;
    }
    return false;
  };
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    double w = rng.uniform() * (m_near + bound_norm);
    if (w < m_near) {
      for (const Cell& cell : cells) {
        if (w < cell.mass) {
          if (cell.zone != 0) return {x, cell.zone};
          const double l = cell.a + linear_draw(cell.ka, cell.kb, rng.uniform()) * (cell.b - cell.a);
          return {cell.pole * (1.0 + std::exp(l)), 0};
        }
        w -= cell.mass;
      }
      continue;
    }
    const double y = x + s * sampler_.unit(rng);
    if (std::fabs(y) <= 1.0 || in_near(y)) continue;
    if (rng.uniform() * bound < h_(y)) return {y, 0};
  }
  raise(ErrorKind::GridFailure, "rejection sampling did not terminate at x=" + std::to_string(x));
}

PathSample DoobChainSampler::sample(double x, RngStream& rng) const {
  if (!(std::fabs(x) > 1.0)) raise(ErrorKind::DomainError, "chain must start outside [-1, 1]");
  PathSample out;
  double t = 0.0;
  out.times.push_back(0.0);
  out.positions.push_back(x);
  const double eps_time = 1e-12 * c_.horizon;
  while (c_.horizon - t > eps_time) {
    double tau = c_.dt;
    if (opt_.far_scale > 0.0) {
      const double dist = std::fabs(x) - 1.0;
      tau *= std::max(1.0, std::pow(dist, p_.alpha) / opt_.far_scale);
    }
    tau = std::min(tau, c_.horizon - t);
    const Move mv = step(x, tau, rng);
    t += tau;
    if (mv.absorbed != 0) {
      if (!opt_.record_path) {
        out.times.resize(1);
        out.positions.resize(1);
        if (x != out.positions.front()) {
          out.times.push_back(t - tau);
          out.positions.push_back(x);
        }
      }
      out.times.push_back(t);
      out.positions.push_back(static_cast<double>(mv.absorbed));
      out.killed = true;
      out.kill_index = out.positions.size() - 1;
      return out;
    }
    x = mv.y;
    if (opt_.record_path) {
      out.times.push_back(t);
      out.positions.push_back(x);
    }
  }
  if (!opt_.record_path) {
    out.times.push_back(t);
    out.positions.push_back(x);
  }
  out.truncated = true;
  return out;
}

PathSample simulate_doob_chain(const StableParams& p, ExteriorPoint x, HarmonicKind h_kind,
                               const SimConfig& c, const DoobChainOptions& opt) {
  const DoobChainSampler sampler(p, h_kind, c, opt);
  RngStream rng = c.rng;
  return sampler.sample(x.value(), rng);
}

}  // namespace stablecond
