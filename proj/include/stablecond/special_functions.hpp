#pragma once

#include "stablecond/quadrature.hpp"
#include "stablecond/stable_model.hpp"

namespace stablecond {

// RHO selects psi_{alpha rho}(x) = (x-1)^{alpha rho_hat - 1} (x+1)^{alpha rho - 1};
// RHO_HAT swaps the two exponents.
enum class ExponentSide { RHO, RHO_HAT };

inline ExponentSide swap(ExponentSide s) {
  return s == ExponentSide::RHO ? ExponentSide::RHO_HAT : ExponentSide::RHO;
}

double psi(const StableParams& p, ExponentSide side, double x);

// Integral of psi over [1, x].
double psi_primitive(const StableParams& p, ExponentSide side, double x,
                     const QuadratureSettings& q = {});

// Same integral over [1, 1 + dx]; keeps full relative accuracy when the upper
// limit is only known as an offset from 1.
double psi_primitive_offset(const StableParams& p, ExponentSide side, double dx,
                            const QuadratureSettings& q = {});

// Integral over [1, 1 + dx] of (u-1)^(c-1) (u+1)^(d-1) for c > 0.
double power_pair_integral(double c, double d, double dx, const QuadratureSettings& q = {});

// Integral over [1, z] of (u-1)^{alpha rho} (u+1)^{alpha rho_hat - 2}.
double correction_integral(const StableParams& p, double z, const QuadratureSettings& q = {});
double correction_integral_offset(const StableParams& p, double dz,
                                  const QuadratureSettings& q = {});

double z_point(double x, double y);
// z_point(x, y) - 1 without cancellation.
double z_point_minus_one(double x, double y);

double boundary_factor_g(const StableParams& p, double y);

// c_{alpha rho} = 2^{alpha rho} pi alpha rho Gamma(alpha rho) / Gamma(1 - alpha rho_hat);
// RHO_HAT swaps rho and rho_hat.
double norm_constant(const StableParams& p, ExponentSide side);

// Exponent pair (alpha rho_hat, alpha rho) for RHO, swapped for RHO_HAT: psi is
// (x-1)^{first-1} (x+1)^{second-1}.
struct ExponentPair {
  double lower;  // attached to (x - 1)
  double upper;  // attached to (x + 1)
};
ExponentPair exponents(const StableParams& p, ExponentSide side);

}  // namespace stablecond
