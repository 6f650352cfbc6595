#pragma once

#include <utility>

#include "stablecond/special_functions.hpp"

namespace stablecond {

// A point of R \ [-1, 1].
class ExteriorPoint {
 public:
  explicit ExteriorPoint(double x);
  double value() const { return x_; }
  operator double() const { return x_; }

 private:
  double x_;
};

enum class HarmonicKind { V1, VMINUS1, V, H };

enum class GreenBranch { X_GT_Y_GT_1, X_NEG_Y_POS, SWAPPED_VIA_DUALITY, REFLECTED };

const char* to_string(HarmonicKind kind);
const char* to_string(GreenBranch branch);

double v1(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q = {});
double v_minus1(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q = {});
double v_total(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q = {});

// The same functions at x = sign * (1 + s), evaluated from the offset s so
// that the boundary behaviour keeps full relative accuracy as s -> 0.
double evaluate_harmonic_at_offset(const StableParams& p, HarmonicKind kind, int sign, double s,
                                   const QuadratureSettings& q = {});

// Invariant function for alpha > 1, without the constant
// pi / (Gamma(1 - alpha rho) Gamma(1 - alpha rho_hat)) (see invariant_h_constant).
double invariant_h(const StableParams& p, ExteriorPoint x, const QuadratureSettings& q = {});
double invariant_h_constant(const StableParams& p);

double evaluate_harmonic(const StableParams& p, HarmonicKind kind, double x,
                         const QuadratureSettings& q = {});

// The function sin(pi alpha rho_hat) x^{alpha-1} (mirrored for x < 0) used by
// the avoid-zero transform.
double avoid_zero_e(const StableParams& p, double x);

// Numerical value of lim v1(x) as x -> +inf (sign > 0) or -inf (sign < 0),
// alpha >= 1. Uses v1(x) = v1(x0) -+ 2 sin(...) (1 - alpha rho_hat) * integral
// of the derivative, which converges at infinity.
double v1_limit(const StableParams& p, int sign, const QuadratureSettings& q = {});

struct GreenValue {
  double value;
  GreenBranch branch;
};

// Potential density of the process killed on entering [-1, 1]. For alpha <= 1
// points closer than diagonal_cutoff raise NearDiagonal; pass 0 to disable.
GreenValue green_u(const StableParams& p, ExteriorPoint x, ExteriorPoint y,
                   const QuadratureSettings& q = {}, double diagonal_cutoff = 1e-8);

// Right-hand side of the boundary identity expressing v1(x) through
// u(x, y), g(y) and the correction integral, minus v1(x).
double lemma31_residual(const StableParams& p, ExteriorPoint x, double y,
                        const QuadratureSettings& q = {});

// c_{alpha rho} u(x, 1 + delta) / delta^{alpha rho}; tends to v1(x) as delta -> 0.
double green_boundary_ratio(const StableParams& p, ExteriorPoint x, double delta,
                            const QuadratureSettings& q = {});

// Integral over [-b,-1) U (1,b] of h(y) u(x,y) dy / h(x) for h in {V1, V}.
double potential_mass(const StableParams& p, HarmonicKind h_kind, ExteriorPoint x, double b,
                      const QuadratureSettings& q = {});

}  // namespace stablecond
