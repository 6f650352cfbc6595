#include "stablecond/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace stablecond {

namespace {
constexpr double kPi = std::numbers::pi;
}

ExponentPair exponents(const StableParams& p, ExponentSide side) {
  if (side == ExponentSide::RHO) return {p.alpha_rho_hat(), p.alpha_rho()};
  return {p.alpha_rho(), p.alpha_rho_hat()};
}

double psi(const StableParams& p, ExponentSide side, double x) {
  if (!(x > 1.0)) raise(ErrorKind::DomainError, "psi needs x > 1");
  const ExponentPair e = exponents(p, side);
  return std::pow(x - 1.0, e.lower - 1.0) * std::pow(x + 1.0, e.upper - 1.0);
}

double power_pair_integral(double c, double d, double dx, const QuadratureSettings& q) {
  if (!(dx >= 0.0)) raise(ErrorKind::DomainError, "upper limit must be >= 1");
  if (dx == 0.0) return 0.0;
  // Near 1: t = (u-1)^c turns (u-1)^(c-1) du into dt/c.
  const double d0 = std::min(dx, 1.0);
  const double inv_c = 1.0 / c;
  auto near = [&](double t) { return inv_c * std::pow(2.0 + std::pow(t, inv_c), d - 1.0); };
  double total = integrate(near, 0.0, std::pow(d0, c), q);
  if (dx > 1.0) {
    auto far = [&](double u) { return std::pow(u - 1.0, c - 1.0) * std::pow(u + 1.0, d - 1.0); };
    total += integrate_log(far, 2.0, 1.0 + dx, q);
  }
  return total;
}

double psi_primitive_offset(const StableParams& p, ExponentSide side, double dx,
                            const QuadratureSettings& q) {
  const ExponentPair e = exponents(p, side);
  return power_pair_integral(e.lower, e.upper, dx, q);
}

double psi_primitive(const StableParams& p, ExponentSide side, double x,
                     const QuadratureSettings& q) {
  if (!(x >= 1.0)) raise(ErrorKind::DomainError, "psi_primitive needs x >= 1");
  return psi_primitive_offset(p, side, x - 1.0, q);
}

double correction_integral_offset(const StableParams& p, double dz, const QuadratureSettings& q) {
  return power_pair_integral(1.0 + p.alpha_rho(), p.alpha_rho_hat() - 1.0, dz, q);
}

double correction_integral(const StableParams& p, double z, const QuadratureSettings& q) {
  if (!(z >= 1.0)) raise(ErrorKind::DomainError, "correction_integral needs z >= 1");
  return correction_integral_offset(p, z - 1.0, q);
}

double z_point(double x, double y) {
  if (!(std::fabs(x) > 1.0 && std::fabs(y) > 1.0) || x == y) {
    raise(ErrorKind::DomainError, "z_point needs |x|,|y| > 1 and x != y");
  }
  return std::fabs(x * y - 1.0) / std::fabs(x - y);
}

double z_point_minus_one(double x, double y) {
  if (!(std::fabs(x) > 1.0 && std::fabs(y) > 1.0) || x == y) {
    raise(ErrorKind::DomainError, "z_point needs |x|,|y| > 1 and x != y");
  }
  const double a = std::fabs(x), b = std::fabs(y);
  if ((x > 0.0) == (y > 0.0)) {
    const double hi = std::max(a, b), lo = std::min(a, b);
    return (hi + 1.0) * (lo - 1.0) / (hi - lo);
  }
  return (a - 1.0) * (b - 1.0) / (a + b);
}

double boundary_factor_g(const StableParams& p, double y) {
  if (!(y > 1.0)) raise(ErrorKind::DomainError, "boundary_factor_g needs y > 1");
  return std::pow(y - 1.0, p.alpha_rho()) * std::pow(y + 1.0, p.alpha_rho_hat() - 1.0);
}

double norm_constant(const StableParams& p, ExponentSide side) {
  const double a = side == ExponentSide::RHO ? p.alpha_rho() : p.alpha_rho_hat();
  const double b = side == ExponentSide::RHO ? p.alpha_rho_hat() : p.alpha_rho();
  return std::pow(2.0, a) * kPi * a * std::tgamma(a) / std::tgamma(1.0 - b);
}

}  // namespace stablecond
