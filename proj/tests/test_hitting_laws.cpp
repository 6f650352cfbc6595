#include <catch_amalgamated.hpp>

#include <cmath>

#include "stablecond/errors.hpp"
#include "stablecond/hitting_laws.hpp"
#include "stablecond/quadrature.hpp"

using namespace stablecond;
using Catch::Approx;

namespace {

HittingWindow pos(double a, double b) { return HittingWindow(a, b, WindowSide::POSITIVE); }

}  // namespace

TEST_CASE("closest reach: small-window ratio and total mass") {
  for (double r : {0.5, 0.3}) {
    const auto p = validate_params(0.5, r);
    for (double x : {2.0, -2.0, 3.0, -3.0}) {
      const ExteriorPoint xe(x);
      const double e = 1e-5;
      const double a = closest_reach_asymptote(p, xe, WindowSide::POSITIVE);
      CHECK(std::fabs(closest_reach_mass(p, xe, pos(1.0, 1.0 + e)) / e - a) / a < 1e-3);
      const double total =
          closest_reach_mass(p, xe, HittingWindow(0.0, std::fabs(x), WindowSide::BOTH));
      CHECK(std::fabs(total - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("closest reach: additivity over windows and sides") {
  const auto p = validate_params(0.5, 0.3);
  const ExteriorPoint x(4.0);
  const double whole = closest_reach_mass(p, x, pos(0.5, 3.0));
  const double parts = closest_reach_mass(p, x, pos(0.5, 1.0)) + closest_reach_mass(p, x, pos(1.0, 3.0));
  CHECK(parts == Approx(whole).epsilon(1e-9));
  const double both = closest_reach_mass(p, x, HittingWindow(1.0, 2.0, WindowSide::BOTH));
  const double sides = closest_reach_mass(p, x, pos(1.0, 2.0)) +
                       closest_reach_mass(p, x, HittingWindow(1.0, 2.0, WindowSide::NEGATIVE));
  CHECK(sides == Approx(both).epsilon(1e-9));
  CHECK_THROWS_AS(closest_reach_mass(validate_params(1.5, 0.5), x, pos(1.0, 2.0)), Error);
}

TEST_CASE("first entrance: density integrates to one, ratio at small windows") {
  for (auto [a, r] : {std::pair{1.0, 0.5}, std::pair{1.5, 0.45}}) {
    const auto p = validate_params(a, r);
    for (double x : {2.0, -2.0}) {
      CHECK(std::fabs(first_entrance_total_mass(p, x) - 1.0) < 1e-8);
      const double e = 1e-4;
      const double m = entrance_window_mass(p, ExteriorPoint(x), e, WindowSide::POSITIVE);
      const double asym = entrance_asymptote(p, ExteriorPoint(x), WindowSide::POSITIVE);
      CHECK(std::fabs(std::pow(e, p.alpha_rho_hat() - 1.0) * m - asym) / asym < 1e-3);
    }
  }
  const auto p = validate_params(1.5, 0.45);
  CHECK(first_entrance_density(p, 3.0, 0.2) > 0.0);
  CHECK_THROWS_AS(first_entrance_density(validate_params(0.5, 0.5), 3.0, 0.2), Error);
}

TEST_CASE("side selection: NEGATIVE over POSITIVE decays like eps^{alpha (rho_hat - rho)}") {
  const auto p = validate_params(1.5, 0.45);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double e : {1e-2, 1e-3, 1e-4}) {
    const double ratio = entrance_window_mass(p, ExteriorPoint(2.0), e, WindowSide::NEGATIVE) /
                         entrance_window_mass(p, ExteriorPoint(2.0), e, WindowSide::POSITIVE);
    sx += std::log(e);
    sy += std::log(ratio);
    sxx += std::log(e) * std::log(e);
    sxy += std::log(e) * std::log(ratio);
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(std::fabs(slope - 0.15) / 0.15 < 0.1);
}

TEST_CASE("avoid-zero closest reach: small-window ratio and total mass") {
  const auto p = validate_params(1.5, 0.5);
  for (double x : {3.0, -2.0}) {
    const double e = 1e-5;
    const double m = circ_closest_reach_mass(p, ExteriorPoint(x), pos(1.0, 1.0 + e), HarmonicKind::V1);
    const double lhs = avoid_zero_e(p, x) / e * m;
    const double rhs = 0.5 * (p.alpha - 1.0) * v1(p, ExteriorPoint(x));
    CHECK(std::fabs(lhs - rhs) / rhs < 1e-3);
    CHECK(std::fabs(circ_closest_reach_total_mass(p, ExteriorPoint(x)) - 1.0) < 1e-8);
  }
  CHECK(std::fabs(circ_closest_reach_total_mass(validate_params(1.8, 0.52), ExteriorPoint(2.5)) - 1.0) <
        1e-8);
  CHECK_THROWS_AS(circ_closest_reach_total_mass(validate_params(1.0, 0.5), ExteriorPoint(2.0)), Error);
}

// The law of the closest point from simulated paths, closed at the horizon
// with the exact law of what the rest of the path can still do.
TEST_CASE("closest reach law against simulation", "[mc]") {
  const auto p = validate_params(0.5, 0.3);
  const double x = 3.0, dt = 1e-3, horizon = 1.0;
  const int n = 10000, steps = static_cast<int>(horizon / dt);
  IncrementSampler s(p);
  const double expected = closest_reach_mass(p, ExteriorPoint(x), pos(1.0, 2.0));
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream rng = RngStream(17, 0).substream(static_cast<std::uint64_t>(i));
    double y = x, m = x;
    for (int k = 0; k < steps; ++k) {
      y += s.increment(dt, rng);
      if (std::fabs(y) < std::fabs(m)) m = y;
    }
    // Once |m| <= 1 the closest point can only move further in. Otherwise the
    // future closest point from y is in (1, min(2,|m|)) on the positive side,
    // or never below |m| with m itself in the window.
    double prob = 0.0;
    const double am = std::fabs(m);
    if (am > 1.0) {
      prob = closest_reach_mass(p, ExteriorPoint(y), pos(1.0, std::min(2.0, am)));
      if (m > 1.0 && m < 2.0) {
        prob += 1.0 - closest_reach_mass(p, ExteriorPoint(y),
                                         HittingWindow(0.0, am, WindowSide::BOTH));
      }
    }
    sum += prob;
    sum2 += prob * prob;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - expected) < 4 * se);
}

TEST_CASE("first entrance law against simulation", "[mc]") {
  const auto p = validate_params(1.5, 0.45);
  const double x = 2.0, dt = 1e-3, horizon = 4.0;
  const int n = 10000, steps = static_cast<int>(horizon / dt);
  IncrementSampler s(p);
  QuadratureSettings q;
  q.rel_tol = 1e-8;
  // Mass of the entrance position in (-1/2, 1/2), away from the singular ends.
  auto mass_in = [&](double from) {
    return integrate([&](double u) { return first_entrance_density(p, from, u); }, -0.5, 0.5, q);
  };
  const double expected = mass_in(x);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    RngStream rng = RngStream(19, 0).substream(static_cast<std::uint64_t>(i));
    double y = x;
    bool entered = false;
    for (int k = 0; k < steps && !entered; ++k) {
      y += s.increment(dt, rng);
      entered = std::fabs(y) < 1.0;
    }
    const double v = entered ? (std::fabs(y) < 0.5 ? 1.0 : 0.0) : mass_in(y);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  // Grid monitoring misses short visits; the bias is small against the noise here.
  CHECK(std::fabs(mean - expected) < 4 * se);
}
