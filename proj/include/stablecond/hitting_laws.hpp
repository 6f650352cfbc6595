#pragma once

#include "stablecond/harmonic.hpp"

namespace stablecond {

enum class WindowSide { POSITIVE, NEGATIVE, BOTH };

const char* to_string(WindowSide side);
WindowSide flip(WindowSide side);

// The event {target in (a, b)} on the chosen side(s) of the origin. a = 0 is
// admitted so that the whole range (0, |x|) can be requested.
struct HittingWindow {
  double a;
  double b;
  WindowSide side;

  HittingWindow(double a_, double b_, WindowSide side_);
};

// Law of the point of closest reach to the origin (alpha < 1).
double closest_reach_mass(const StableParams& p, ExteriorPoint x, const HittingWindow& w,
                          const QuadratureSettings& q = {});

// lim mass(x, (1, 1+eps)) / eps for the chosen side.
double closest_reach_asymptote(const StableParams& p, ExteriorPoint x, WindowSide side,
                               const QuadratureSettings& q = {});

// Density in y of the position at first entrance into (-1, 1) from X,
// |X| > 1 (alpha >= 1).
double first_entrance_density(const StableParams& p, double X, double y,
                              const QuadratureSettings& q = {});

// Integral of first_entrance_density over (-1, 1).
double first_entrance_total_mass(const StableParams& p, double X, const QuadratureSettings& q = {});

// P^x(xi at first entrance into (-(1+eps), 1+eps) lies in (1, 1+eps)) for
// POSITIVE; (-(1+eps), -1) for NEGATIVE.
double entrance_window_mass(const StableParams& p, ExteriorPoint x, double eps, WindowSide side,
                            const QuadratureSettings& q = {});

// lim eps^{alpha rho_hat - 1} * entrance_window_mass(POSITIVE); the negative
// side uses the reflected constant and v_{-1}.
double entrance_asymptote(const StableParams& p, ExteriorPoint x, WindowSide side,
                          const QuadratureSettings& q = {});

// Closest reach under the avoid-zero transform (alpha > 1). kind selects
// the side through the harmonic function: V1 positive, VMINUS1 negative, V both.
double circ_closest_reach_mass(const StableParams& p, ExteriorPoint x, const HittingWindow& w,
                               HarmonicKind kind, const QuadratureSettings& q = {});

// Mass of the whole range (0, |x|), both sides.
double circ_closest_reach_total_mass(const StableParams& p, ExteriorPoint x,
                                     const QuadratureSettings& q = {});

}  // namespace stablecond
