#include "stablecond/hitting_laws.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace stablecond {

namespace {

constexpr double kPi = std::numbers::pi;

double sin_pi(double t) { return std::sin(kPi * t); }

void require_below_one(const StableParams& p, const char* what) {
  if (!(p.alpha < 1.0)) raise(ErrorKind::ScopeError, std::string(what) + " requires alpha < 1");
}

// Closest-reach window mass from x > 1 for one side.
double closest_reach_one_side(const StableParams& p, double x, double a, double b, bool same_side,
                              const QuadratureSettings& q) {
  const double hi = std::min(b, x);
  if (!(a < hi)) return 0.0;
  const double k = std::pow(2.0, -p.alpha) * std::tgamma(1.0 - p.alpha_rho()) /
                   (std::tgamma(1.0 - p.alpha) * std::tgamma(p.alpha_rho_hat()));
  const double sign = same_side ? 1.0 : -1.0;
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  // Integrand at z = 1 + s, from the offset.
  auto g = [&](double s) {
    return (1.0 + sign / (1.0 + s)) * std::pow(s, arh - 1.0) * std::pow(2.0 + s, ar - 1.0);
  };
  auto f = [&](double z) { return g(z - 1.0); };
  const double zlo = x / hi;
  const double zhi = a > 0.0 ? x / a : std::numeric_limits<double>::infinity();
  // At z = 1 the same-side integrand behaves like (z-1)^{alpha rho_hat - 1}.
  const double kpow = same_side ? 1.0 / p.alpha_rho_hat() : 1.0 / (1.0 + p.alpha_rho_hat());
  const bool touches_one = hi == x;
  double total = 0.0;
  if (std::isinf(zhi)) {
    const double mid = std::max(2.0, zlo);
    if (zlo < mid) {
      total += touches_one ? integrate_left_power(g, 0.0, mid - 1.0, kpow, q) : integrate(f, zlo, mid, q);
    }
    total += integrate_to_infinity_log(f, mid, q);
  } else if (touches_one) {
    total = integrate_left_power(g, 0.0, zhi - 1.0, kpow, q);
  } else {
    total = integrate(f, zlo, zhi, q);
  }
  return k * total;
}

// First entrance density from X > 1 written in (1 + y, 1 - y) to keep
// accuracy at both endpoints.
double entrance_density_raw(const StableParams& p, double X, double one_plus_y, double one_minus_y,
                            double big_psi) {
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  const double edge = std::pow(one_plus_y, -ar) * std::pow(one_minus_y, -arh);
  const double y = one_plus_y <= one_minus_y ? one_plus_y - 1.0 : 1.0 - one_minus_y;
  double bracket = std::pow(X + 1.0, ar) * std::pow(X - 1.0, arh) / (X - y);
  if (p.alpha > 1.0) bracket -= (p.alpha - 1.0) * big_psi;
  return sin_pi(arh) / kPi * edge * bracket;
}

double entrance_side_mass(const StableParams& p, double x, double eps, bool positive,
                          const QuadratureSettings& q) {
  const double X = x / (1.0 + eps);
  const double width = eps / (1.0 + eps);
  const double big_psi = p.alpha > 1.0 ? psi_primitive(p, ExponentSide::RHO, X, q) : 0.0;
  if (positive) {
    auto f = [&](double s) { return entrance_density_raw(p, X, 2.0 - s, s, big_psi); };
    return integrate_left_power(f, 0.0, width, 1.0 / (1.0 - p.alpha_rho_hat()), q);
  }
  auto f = [&](double s) { return entrance_density_raw(p, X, s, 2.0 - s, big_psi); };
  return integrate_left_power(f, 0.0, width, 1.0 / (1.0 - p.alpha_rho()), q);
}

double circ_one_side(const StableParams& p, double x, double a, double b, HarmonicKind kind,
                     const QuadratureSettings& q) {
  const double hi = std::min(b, x);
  if (!(a < hi)) return 0.0;
  const double pref = (p.alpha - 1.0) / (2.0 * sin_pi(p.alpha_rho_hat()));
  auto f = [&](double u) { return std::pow(u, -p.alpha) * evaluate_harmonic(p, kind, u, q); };
  auto g = [&](double s) {
    return std::pow(1.0 + s, -p.alpha) * evaluate_harmonic_at_offset(p, kind, 1, s, q);
  };
  const double ulo = x / hi;
  const double uhi = a > 0.0 ? x / a : std::numeric_limits<double>::infinity();
  const bool touches_one = hi == x;
  // v1 has its pole (u-1)^{alpha rho_hat - 1} at u = 1.
  const double kpow = 1.0 / p.alpha_rho_hat();
  QuadratureSettings outer = q;
  outer.rel_tol = std::max(q.rel_tol, 1e-9);
  double total = 0.0;
  if (std::isinf(uhi)) {
    const double mid = std::max(2.0, ulo);
    if (ulo < mid) {
      total += touches_one ? integrate_left_power(g, 0.0, mid - 1.0, kpow, outer)
                           : integrate(f, ulo, mid, outer);
    }
    total += integrate_to_infinity_log(f, mid, outer);
  } else if (touches_one) {
    total = integrate_left_power(g, 0.0, uhi - 1.0, kpow, outer);
  } else {
    total = integrate(f, ulo, uhi, outer);
  }
  return pref * total;
}

HarmonicKind flip(HarmonicKind k) {
  if (k == HarmonicKind::V1) return HarmonicKind::VMINUS1;
  if (k == HarmonicKind::VMINUS1) return HarmonicKind::V1;
  return k;
}

}  // namespace

const char* to_string(WindowSide side) {
  switch (side) {
    case WindowSide::POSITIVE: return "POSITIVE";
    case WindowSide::NEGATIVE: return "NEGATIVE";
    case WindowSide::BOTH: return "BOTH";
  }
  return "?";
}

WindowSide flip(WindowSide side) {
  if (side == WindowSide::POSITIVE) return WindowSide::NEGATIVE;
  if (side == WindowSide::NEGATIVE) return WindowSide::POSITIVE;
  return side;
}

HittingWindow::HittingWindow(double a_, double b_, WindowSide side_) : a(a_), b(b_), side(side_) {
  if (!(a >= 0.0) || !(b > a)) raise(ErrorKind::DomainError, "window needs 0 <= a < b");
}

double closest_reach_mass(const StableParams& p, ExteriorPoint xe, const HittingWindow& w,
                          const QuadratureSettings& q) {
  require_below_one(p, "closest_reach_mass");
  const double x = xe.value();
  if (x < 0.0) return closest_reach_mass(p.dual(), ExteriorPoint(-x), HittingWindow(w.a, w.b, flip(w.side)), q);
  double total = 0.0;
  if (w.side != WindowSide::NEGATIVE) total += closest_reach_one_side(p, x, w.a, w.b, true, q);
  if (w.side != WindowSide::POSITIVE) total += closest_reach_one_side(p, x, w.a, w.b, false, q);
  return total;
}

double closest_reach_asymptote(const StableParams& p, ExteriorPoint x, WindowSide side,
                               const QuadratureSettings& q) {
  require_below_one(p, "closest_reach_asymptote");
  const double c = std::pow(2.0, -p.alpha) * std::tgamma(1.0 - p.alpha_rho()) *
                   std::tgamma(1.0 - p.alpha_rho_hat()) / (kPi * std::tgamma(1.0 - p.alpha));
  switch (side) {
    case WindowSide::POSITIVE: return c * v1(p, x, q);
    case WindowSide::NEGATIVE: return c * v_minus1(p, x, q);
    case WindowSide::BOTH: return c * v_total(p, x, q);
  }
  return 0.0;
}

double first_entrance_density(const StableParams& p, double X, double y, const QuadratureSettings& q) {
  if (!(p.alpha >= 1.0)) raise(ErrorKind::ScopeError, "first_entrance_density requires alpha >= 1");
  if (!(std::fabs(X) > 1.0) || !(std::fabs(y) < 1.0)) {
    raise(ErrorKind::DomainError, "first_entrance_density needs |X| > 1 and |y| < 1");
  }
  if (X < 0.0) return first_entrance_density(p.dual(), -X, -y, q);
  const double big_psi = p.alpha > 1.0 ? psi_primitive(p, ExponentSide::RHO, X, q) : 0.0;
  return entrance_density_raw(p, X, 1.0 + y, 1.0 - y, big_psi);
}

double first_entrance_total_mass(const StableParams& p, double X, const QuadratureSettings& q) {
  if (!(p.alpha >= 1.0)) raise(ErrorKind::ScopeError, "first_entrance_total_mass requires alpha >= 1");
  if (X < 0.0) return first_entrance_total_mass(p.dual(), -X, q);
  const double big_psi = p.alpha > 1.0 ? psi_primitive(p, ExponentSide::RHO, X, q) : 0.0;
  auto right = [&](double s) { return entrance_density_raw(p, X, 2.0 - s, s, big_psi); };
  auto left = [&](double s) { return entrance_density_raw(p, X, s, 2.0 - s, big_psi); };
  return integrate_left_power(right, 0.0, 1.0, 1.0 / (1.0 - p.alpha_rho_hat()), q) +
         integrate_left_power(left, 0.0, 1.0, 1.0 / (1.0 - p.alpha_rho()), q);
}

double entrance_window_mass(const StableParams& p, ExteriorPoint xe, double eps, WindowSide side,
                            const QuadratureSettings& q) {
  if (!(p.alpha >= 1.0)) raise(ErrorKind::ScopeError, "entrance_window_mass requires alpha >= 1");
  const double x = xe.value();
  if (!(eps > 0.0) || !(std::fabs(x) > 1.0 + eps)) {
    raise(ErrorKind::DomainError, "entrance_window_mass needs eps > 0 and |x| > 1 + eps");
  }
  if (x < 0.0) return entrance_window_mass(p.dual(), ExteriorPoint(-x), eps, flip(side), q);
  double total = 0.0;
  if (side != WindowSide::NEGATIVE) total += entrance_side_mass(p, x, eps, true, q);
  if (side != WindowSide::POSITIVE) total += entrance_side_mass(p, x, eps, false, q);
  return total;
}

double entrance_asymptote(const StableParams& p, ExteriorPoint x, WindowSide side,
                          const QuadratureSettings& q) {
  if (!(p.alpha >= 1.0)) raise(ErrorKind::ScopeError, "entrance_asymptote requires alpha >= 1");
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  const double cpos = std::pow(2.0, -ar) / ((1.0 - arh) * kPi);
  const double cneg = std::pow(2.0, -arh) / ((1.0 - ar) * kPi);
  switch (side) {
    case WindowSide::POSITIVE: return cpos * v1(p, x, q);
    case WindowSide::NEGATIVE: return cneg * v_minus1(p, x, q);
    case WindowSide::BOTH:
      if (p.rho != 0.5) raise(ErrorKind::DomainError, "the two sides scale differently unless rho = 1/2");
      return cpos * v1(p, x, q) + cneg * v_minus1(p, x, q);
  }
  return 0.0;
}

double circ_closest_reach_mass(const StableParams& p, ExteriorPoint xe, const HittingWindow& w,
                               HarmonicKind kind, const QuadratureSettings& q) {
  if (!(p.alpha > 1.0)) raise(ErrorKind::ScopeError, "circ_closest_reach_mass requires alpha > 1");
  const WindowSide expected = kind == HarmonicKind::V1        ? WindowSide::POSITIVE
                              : kind == HarmonicKind::VMINUS1 ? WindowSide::NEGATIVE
                                                              : WindowSide::BOTH;
  if (kind == HarmonicKind::H || w.side != expected) {
    raise(ErrorKind::DomainError, "kind must be V1, VMINUS1 or V and match the window side");
  }
  const double x = xe.value();
  if (x < 0.0) {
    return circ_closest_reach_mass(p.dual(), ExteriorPoint(-x), HittingWindow(w.a, w.b, flip(w.side)),
                                   flip(kind), q);
  }
  if (kind == HarmonicKind::V) {
    return circ_one_side(p, x, w.a, w.b, HarmonicKind::V1, q) +
           circ_one_side(p, x, w.a, w.b, HarmonicKind::VMINUS1, q);
  }
  return circ_one_side(p, x, w.a, w.b, kind, q);
}

double circ_closest_reach_total_mass(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q) {
  return circ_closest_reach_mass(p, x, HittingWindow(0.0, std::fabs(x.value()), WindowSide::BOTH),
                                 HarmonicKind::V, q);
}

}  // namespace stablecond
