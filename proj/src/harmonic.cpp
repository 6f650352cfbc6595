#include "stablecond/harmonic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stablecond {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this |x| the alpha > 1 harmonic functions are continued through their
// derivative; the closed form loses digits to cancellation out there.
constexpr double kLargeArgument = 50.0;

double sin_pi(double t) { return std::sin(kPi * t); }

double positive_part(double t) { return t > 0.0 ? t : 0.0; }

void require_exterior(double x, const char* what) {
  if (!(std::fabs(x) > 1.0) || !std::isfinite(x)) {
    raise(ErrorKind::DomainError, std::string(what) + " needs |x| > 1, got " + std::to_string(x));
  }
}

// Integral over [a, b] of (u-1)^(c-1) (u+1)^(d-1), 2 <= a < b, smooth there.
double smooth_pair(double c, double d, double a, double b, const QuadratureSettings& q) {
  auto f = [&](double u) { return std::pow(u - 1.0, c - 1.0) * std::pow(u + 1.0, d - 1.0); };
  return integrate_log(f, a, b, q);
}

double v1_closed(const StableParams& p, double x, const QuadratureSettings& q) {
  const double am1 = positive_part(p.alpha - 1.0);
  if (x > 1.0) {
    const double corr = am1 > 0.0 ? am1 * psi_primitive(p, ExponentSide::RHO, x, q) : 0.0;
    return sin_pi(p.alpha_rho_hat()) * ((x + 1.0) * psi(p, ExponentSide::RHO, x) - corr);
  }
  const double ax = -x;
  const double corr = am1 > 0.0 ? am1 * psi_primitive(p, ExponentSide::RHO_HAT, ax, q) : 0.0;
  return sin_pi(p.alpha_rho()) * ((ax - 1.0) * psi(p, ExponentSide::RHO_HAT, ax) - corr);
}

double v1_continued(const StableParams& p, double x, const QuadratureSettings& q) {
  const double arh = p.alpha_rho_hat(), ar = p.alpha_rho();
  if (x > 0.0) {
    const double tail = smooth_pair(arh - 1.0, ar, kLargeArgument, x, q);
    return v1_closed(p, kLargeArgument, q) - 2.0 * sin_pi(arh) * (1.0 - arh) * tail;
  }
  const double tail = smooth_pair(ar, arh - 1.0, kLargeArgument, -x, q);
  return v1_closed(p, -kLargeArgument, q) + 2.0 * sin_pi(ar) * (1.0 - arh) * tail;
}

double v1_raw(const StableParams& p, double x, const QuadratureSettings& q) {
  if (p.alpha > 1.0 && std::fabs(x) > kLargeArgument) return v1_continued(p, x, q);
  return v1_closed(p, x, q);
}

double v_minus1_raw(const StableParams& p, double x, const QuadratureSettings& q) {
  if (p.alpha > 1.0 && std::fabs(x) > kLargeArgument) return v1_continued(p.dual(), -x, q);
  const double am1 = positive_part(p.alpha - 1.0);
  if (x > 1.0) {
    const double corr = am1 > 0.0 ? am1 * psi_primitive(p, ExponentSide::RHO, x, q) : 0.0;
    return sin_pi(p.alpha_rho_hat()) * ((x - 1.0) * psi(p, ExponentSide::RHO, x) - corr);
  }
  const double ax = -x;
  const double corr = am1 > 0.0 ? am1 * psi_primitive(p, ExponentSide::RHO_HAT, ax, q) : 0.0;
  return sin_pi(p.alpha_rho()) * ((ax + 1.0) * psi(p, ExponentSide::RHO_HAT, ax) - corr);
}

// x > y > 1.
double green_branch_a(const StableParams& p, double x, double y, const QuadratureSettings& q) {
  const double k = std::pow(2.0, 1.0 - p.alpha) / (std::tgamma(p.alpha_rho()) * std::tgamma(p.alpha_rho_hat()));
  const double dz = z_point_minus_one(x, y);
  double bracket = std::pow(x - y, p.alpha - 1.0) * psi_primitive_offset(p, ExponentSide::RHO_HAT, dz, q);
  if (p.alpha > 1.0) {
    bracket -= (p.alpha - 1.0) * psi_primitive_offset(p, ExponentSide::RHO_HAT, y - 1.0, q) *
               psi_primitive(p, ExponentSide::RHO, x, q);
  }
  return k * bracket;
}

// x < -1 < 1 < y.
double green_branch_b(const StableParams& p, double x, double y, const QuadratureSettings& q) {
  const double k = std::pow(2.0, 1.0 - p.alpha) / (std::tgamma(p.alpha_rho()) * std::tgamma(p.alpha_rho_hat())) *
                   sin_pi(p.alpha_rho()) / sin_pi(p.alpha_rho_hat());
  const double dz = z_point_minus_one(x, y);
  double bracket = std::pow(y - x, p.alpha - 1.0) * psi_primitive_offset(p, ExponentSide::RHO_HAT, dz, q);
  if (p.alpha > 1.0) {
    bracket -= (p.alpha - 1.0) * psi_primitive_offset(p, ExponentSide::RHO_HAT, y - 1.0, q) *
               psi_primitive(p, ExponentSide::RHO_HAT, -x, q);
  }
  return k * bracket;
}

}  // namespace

ExteriorPoint::ExteriorPoint(double x) : x_(x) { require_exterior(x, "ExteriorPoint"); }

const char* to_string(HarmonicKind kind) {
  switch (kind) {
    case HarmonicKind::V1: return "V1";
    case HarmonicKind::VMINUS1: return "VMINUS1";
    case HarmonicKind::V: return "V";
    case HarmonicKind::H: return "H";
  }
  return "?";
}

const char* to_string(GreenBranch branch) {
  switch (branch) {
    case GreenBranch::X_GT_Y_GT_1: return "X_GT_Y_GT_1";
    case GreenBranch::X_NEG_Y_POS: return "X_NEG_Y_POS";
    case GreenBranch::SWAPPED_VIA_DUALITY: return "SWAPPED_VIA_DUALITY";
    case GreenBranch::REFLECTED: return "REFLECTED";
  }
  return "?";
}

double v1(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q) {
  return v1_raw(p, x.value(), q);
}

double v_minus1(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q) {
  return v_minus1_raw(p, x.value(), q);
}

double v_total(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q) {
  return v1_raw(p, x.value(), q) + v_minus1_raw(p, x.value(), q);
}

double invariant_h(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q) {
  if (!(p.alpha > 1.0)) raise(ErrorKind::ScopeError, "invariant_h requires alpha > 1");
  const double xv = x.value();
  if (xv > 1.0) return sin_pi(p.alpha_rho_hat()) * psi_primitive(p, ExponentSide::RHO, xv, q);
  return sin_pi(p.alpha_rho()) * psi_primitive(p, ExponentSide::RHO_HAT, -xv, q);
}

double invariant_h_constant(const StableParams& p) {
  return kPi / (std::tgamma(1.0 - p.alpha_rho()) * std::tgamma(1.0 - p.alpha_rho_hat()));
}

double evaluate_harmonic(const StableParams& p, HarmonicKind kind, double x,
                         const QuadratureSettings& q) {
  const ExteriorPoint e(x);
  switch (kind) {
    case HarmonicKind::V1: return v1(p, e, q);
    case HarmonicKind::VMINUS1: return v_minus1(p, e, q);
    case HarmonicKind::V: return v_total(p, e, q);
    case HarmonicKind::H: return invariant_h(p, e, q);
  }
  return 0.0;
}

double evaluate_harmonic_at_offset(const StableParams& p, HarmonicKind kind, int sign, double s,
                                   const QuadratureSettings& q) {
  if (!(s > 0.0)) raise(ErrorKind::DomainError, "offset must be positive");
  if (kind == HarmonicKind::V) {
    return evaluate_harmonic_at_offset(p, HarmonicKind::V1, sign, s, q) +
           evaluate_harmonic_at_offset(p, HarmonicKind::VMINUS1, sign, s, q);
  }
  const double x = sign > 0 ? 1.0 + s : -(1.0 + s);
  if (kind == HarmonicKind::H || (p.alpha > 1.0 && 1.0 + s > kLargeArgument)) {
    return evaluate_harmonic(p, kind, x, q);
  }
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  const double am1 = positive_part(p.alpha - 1.0);
  const bool pole_side = (kind == HarmonicKind::V1) == (sign > 0);
  if (sign > 0) {
    // psi_{alpha rho}(1+s) = s^{arh-1} (2+s)^{ar-1}
    const double corr = am1 > 0.0 ? am1 * psi_primitive_offset(p, ExponentSide::RHO, s, q) : 0.0;
    const double lead = pole_side ? std::pow(s, arh - 1.0) * std::pow(2.0 + s, ar)
                                  : std::pow(s, arh) * std::pow(2.0 + s, ar - 1.0);
    return sin_pi(arh) * (lead - corr);
  }
  const double corr = am1 > 0.0 ? am1 * psi_primitive_offset(p, ExponentSide::RHO_HAT, s, q) : 0.0;
  const double lead = pole_side ? std::pow(s, ar - 1.0) * std::pow(2.0 + s, arh)
                                : std::pow(s, ar) * std::pow(2.0 + s, arh - 1.0);
  return sin_pi(ar) * (lead - corr);
}

double avoid_zero_e(const StableParams& p, double x) {
  if (x == 0.0 || !std::isfinite(x)) raise(ErrorKind::DomainError, "avoid_zero_e needs x != 0");
  const double s = x > 0.0 ? sin_pi(p.alpha_rho_hat()) : sin_pi(p.alpha_rho());
  return s * std::pow(std::fabs(x), p.alpha - 1.0);
}

double v1_limit(const StableParams& p, int sign, const QuadratureSettings& q) {
  if (p.alpha < 1.0) return 0.0;  // v1 decays like |x|^{alpha-1}
  const double arh = p.alpha_rho_hat(), ar = p.alpha_rho();
  const double x0 = 2.0;
  if (sign > 0) {
    auto f = [&](double u) { return std::pow(u - 1.0, arh - 2.0) * std::pow(u + 1.0, ar - 1.0); };
    return v1_closed(p, x0, q) - 2.0 * sin_pi(arh) * (1.0 - arh) * integrate_to_infinity(f, x0, q);
  }
  auto f = [&](double u) { return std::pow(u - 1.0, ar - 1.0) * std::pow(u + 1.0, arh - 2.0); };
  return v1_closed(p, -x0, q) + 2.0 * sin_pi(ar) * (1.0 - arh) * integrate_to_infinity(f, x0, q);
}

GreenValue green_u(const StableParams& p, ExteriorPoint xe, ExteriorPoint ye,
                   const QuadratureSettings& q, double diagonal_cutoff) {
  const double x = xe.value(), y = ye.value();
  const bool xpos = x > 0.0, ypos = y > 0.0;
  if (x == y) {
    return {0.0, xpos ? GreenBranch::X_GT_Y_GT_1 : GreenBranch::REFLECTED};
  }
  if (p.alpha <= 1.0 && std::fabs(x - y) < diagonal_cutoff) {
    raise(ErrorKind::NearDiagonal, "green_u evaluated within the diagonal cutoff");
  }
  if (xpos && ypos) {
    if (x > y) return {green_branch_a(p, x, y, q), GreenBranch::X_GT_Y_GT_1};
    return {green_branch_a(p.dual(), y, x, q), GreenBranch::SWAPPED_VIA_DUALITY};
  }
  if (!xpos && ypos) return {green_branch_b(p, x, y, q), GreenBranch::X_NEG_Y_POS};
  if (xpos && !ypos) return {green_branch_b(p.dual(), y, x, q), GreenBranch::SWAPPED_VIA_DUALITY};
  // Both negative: reflect to (-x, -y) with rho and rho_hat exchanged.
  if (-x > -y) return {green_branch_a(p.dual(), -x, -y, q), GreenBranch::REFLECTED};
  return {green_branch_a(p, -y, -x, q), GreenBranch::REFLECTED};
}

double lemma31_residual(const StableParams& p, ExteriorPoint xe, double y,
                        const QuadratureSettings& q) {
  const double x = xe.value();
  if (!(y > 1.0) || !((x > y) || (x < -1.0))) {
    raise(ErrorKind::DomainError, "lemma31_residual needs x > y > 1 or x < -1 < 1 < y");
  }
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  const double u = x > 0.0 ? green_branch_a(p, x, y, q) : green_branch_b(p, x, y, q);
  const double g = boundary_factor_g(p, y);
  const double c = norm_constant(p, ExponentSide::RHO);
  const double s = x > 0.0 ? sin_pi(arh) : sin_pi(ar);
  const double corr = correction_integral_offset(p, z_point_minus_one(x, y), q);
  double rhs = std::pow(2.0, arh - 1.0) * c * u / g -
               s * (1.0 - arh) * std::pow(std::fabs(x - y), p.alpha - 1.0) * corr / g;
  if (p.alpha > 1.0) {
    const double ix = x > 0.0 ? psi_primitive(p, ExponentSide::RHO, x, q)
                              : psi_primitive(p, ExponentSide::RHO_HAT, -x, q);
    const double iy = psi_primitive_offset(p, ExponentSide::RHO_HAT, y - 1.0, q);
    rhs += (p.alpha - 1.0) * s * ix * (ar * iy / g - 1.0);
  }
  return rhs - v1_raw(p, x, q);
}

double green_boundary_ratio(const StableParams& p, ExteriorPoint xe, double delta,
                            const QuadratureSettings& q) {
  const double x = xe.value();
  if (!(delta > 0.0) || (x > 0.0 && !(1.0 + delta < x))) {
    raise(ErrorKind::DomainError, "green_boundary_ratio needs 0 < delta and 1 + delta < |x|");
  }
  const double y = 1.0 + delta;
  const double u = x > 0.0 ? green_branch_a(p, x, y, q) : green_branch_b(p, x, y, q);
  return norm_constant(p, ExponentSide::RHO) * u / std::pow(delta, p.alpha_rho());
}

double potential_mass(const StableParams& p, HarmonicKind h_kind, ExteriorPoint xe, double b,
                      const QuadratureSettings& q) {
  if (h_kind != HarmonicKind::V1 && h_kind != HarmonicKind::V) {
    raise(ErrorKind::DomainError, "potential_mass supports h in {V1, V}");
  }
  if (!(b > 1.0)) raise(ErrorKind::DomainError, "potential_mass needs b > 1");
  const double x = xe.value();
  QuadratureSettings outer = q;
  outer.rel_tol = std::max(q.rel_tol, 1e-8);
  const double hx = evaluate_harmonic(p, h_kind, x, q);
  auto integrand = [&](double y) {
    if (std::fabs(y) <= 1.0 || y == x) return 0.0;
    const double h = evaluate_harmonic(p, h_kind, y, q);
    return h * green_u(p, xe, ExteriorPoint(y), q, 0.0).value;
  };
  // Endpoint behaviour is algebraic, (y-1)^{alpha-1} at +-1 and |x-y|^{alpha-1}
  // on the diagonal; w -> w^k with k = 1/alpha flattens it for alpha < 1.
  const double k = p.alpha < 1.0 ? 1.0 / p.alpha : 2.0;
  auto piece = [&](double l, double r) {
    const double m = 0.5 * (l + r);
    return integrate_left_power(integrand, l, m, k, outer) +
           integrate_right_power(integrand, m, r, k, outer);
  };
  double total = 0.0;
  for (int side : {1, -1}) {
    const double lo = side > 0 ? 1.0 : -b, hi = side > 0 ? b : -1.0;
    if (x > lo && x < hi) {
      total += piece(lo, x) + piece(x, hi);
    } else {
      total += piece(lo, hi);
    }
  }
  return total / hx;
}

}  // namespace stablecond
