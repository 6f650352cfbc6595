#include <catch_amalgamated.hpp>

#include <cmath>

#include "stablecond/errors.hpp"
#include "stablecond/harmonic.hpp"

using namespace stablecond;
using Catch::Approx;

namespace {

const std::pair<double, double> kGrid[] = {{0.5, 0.5}, {0.5, 0.3}, {1.2, 0.45}, {1.5, 0.5}, {1.8, 0.52}};

}  // namespace

TEST_CASE("harmonic functions at the symmetric alpha = 1/2 point") {
  const auto p = validate_params(0.5, 0.5);
  CHECK(v1(p, ExteriorPoint(3.0)) == Approx(std::pow(2.0, -0.75)).epsilon(1e-10));
  CHECK(v1(p, ExteriorPoint(-3.0)) == Approx(std::pow(2.0, -1.75)).epsilon(1e-10));
  CHECK(v_total(p, ExteriorPoint(3.0)) == Approx(0.891906).epsilon(1e-6));
}

TEST_CASE("v is the sum of v1 and v_minus1, and reflection swaps them") {
  for (auto [a, r] : kGrid) {
    const auto p = validate_params(a, r);
    for (double x : {-7.0, -1.3, 1.3, 7.0}) {
      const ExteriorPoint xe(x);
      CHECK(v_total(p, xe) == Approx(v1(p, xe) + v_minus1(p, xe)).epsilon(1e-12));
      CHECK(v1(p.dual(), ExteriorPoint(-x)) == Approx(v_minus1(p, xe)).epsilon(1e-10));
      CHECK(v1(p, xe) > 0.0);
      CHECK(evaluate_harmonic(p, HarmonicKind::V, x) == Approx(v_total(p, xe)));
    }
  }
}

TEST_CASE("boundary exponents of v1: pole at +1, zero at -1") {
  for (auto [a, r] : {std::pair{0.5, 0.3}, std::pair{1.5, 0.45}}) {
    const auto p = validate_params(a, r);
    auto slope = [&](HarmonicKind k, int sign) {
      return std::log10(evaluate_harmonic_at_offset(p, k, sign, 1e-8) /
                        evaluate_harmonic_at_offset(p, k, sign, 1e-9));
    };
    CHECK(slope(HarmonicKind::V1, 1) == Approx(p.alpha_rho_hat() - 1.0).margin(1e-4));
    CHECK(slope(HarmonicKind::V1, -1) == Approx(p.alpha_rho()).margin(1e-4));
    CHECK(slope(HarmonicKind::VMINUS1, -1) == Approx(p.alpha_rho() - 1.0).margin(1e-4));
    CHECK(slope(HarmonicKind::VMINUS1, 1) == Approx(p.alpha_rho_hat()).margin(1e-4));
    CHECK(evaluate_harmonic_at_offset(p, HarmonicKind::V1, 1, 0.5) ==
          Approx(v1(p, ExteriorPoint(1.5))).epsilon(1e-12));
  }
}

TEST_CASE("v1 for alpha > 1 has a finite limit at infinity") {
  const auto p = validate_params(1.5, 0.5);
  const double lim = v1_limit(p, 1);
  CHECK(lim == Approx(0.5990701).epsilon(1e-6));
  CHECK(v1_limit(p, -1) == Approx(lim).epsilon(1e-6));
  // Slow approach: the remainder decays like x^{1 - alpha}.
  const double r1 = std::fabs(v1(p, ExteriorPoint(1e4)) - lim);
  const double r2 = std::fabs(v1(p, ExteriorPoint(1e6)) - lim);
  CHECK(r2 < r1);
  CHECK(r2 / r1 == Approx(std::pow(100.0, 1.0 - p.alpha)).epsilon(0.01));
}

TEST_CASE("avoid-zero function and invariant function") {
  const auto p = validate_params(1.5, 0.5);
  CHECK(avoid_zero_e(p, 2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(avoid_zero_e(p, -8.0) > 0.0);
  CHECK(invariant_h(p, ExteriorPoint(3.0)) > 0.0);
  CHECK(invariant_h_constant(p) > 0.0);
  CHECK_THROWS_AS(invariant_h(validate_params(0.8, 0.5), ExteriorPoint(3.0)), Error);
}

TEST_CASE("exterior points reject [-1, 1]") {
  for (double x : {1.0, -1.0, 0.0, 0.999}) {
    try {
      ExteriorPoint e(x);
      FAIL("accepted " << x);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DomainError);
    }
  }
  CHECK_THROWS_AS(ExteriorPoint(std::nan("")), Error);
}

TEST_CASE("boundary identity holds on the grid") {
  for (auto [a, r] : kGrid) {
    const auto p = validate_params(a, r);
    for (double x : {1.1, -1.1, 2.0, -2.0, 5.0, -5.0, 20.0, -20.0}) {
      const double scale = std::max(1.0, v1(p, ExteriorPoint(x)));
      for (double y : {1.05, 1.5, 3.0}) {
        if (!(x > y || x < -1.0)) continue;
        CHECK(std::fabs(lemma31_residual(p, ExteriorPoint(x), y)) < 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("Green's function near +1 recovers v1") {
  for (auto [a, r] : kGrid) {
    const auto p = validate_params(a, r);
    for (double x : {2.0, -5.0}) {
      const double v = v1(p, ExteriorPoint(x));
      const double e4 = std::fabs(green_boundary_ratio(p, ExteriorPoint(x), 1e-4) - v) / v;
      const double e6 = std::fabs(green_boundary_ratio(p, ExteriorPoint(x), 1e-6) - v) / v;
      CHECK(e6 < 1e-3);
      CHECK(e6 <= e4 + 1e-9);
    }
  }
}

TEST_CASE("Green's function: symmetries, diagonal and sign") {
  const auto p = validate_params(1.5, 0.45);
  CHECK(green_u(p, ExteriorPoint(3.0), ExteriorPoint(3.0)).value == 0.0);
  const auto u = green_u(p, ExteriorPoint(3.0), ExteriorPoint(2.0));
  CHECK(u.branch == GreenBranch::X_GT_Y_GT_1);
  CHECK(u.value > 0.0);
  // Reflection: u^{rho}(x, y) = u^{rho_hat}(-x, -y).
  CHECK(green_u(p.dual(), ExteriorPoint(-3.0), ExteriorPoint(-2.0)).value == Approx(u.value));
  CHECK(green_u(p, ExteriorPoint(-2.0), ExteriorPoint(4.0)).branch == GreenBranch::X_NEG_Y_POS);
  const auto q = validate_params(0.5, 0.5);
  CHECK_THROWS_AS(green_u(q, ExteriorPoint(2.0), ExteriorPoint(2.0 + 1e-10)), Error);
  CHECK_NOTHROW(green_u(q, ExteriorPoint(2.0), ExteriorPoint(2.0 + 1e-10), {}, 0.0));
}

TEST_CASE("potential mass grows with the window") {
  const auto p = validate_params(1.5, 0.45);
  const double m2 = potential_mass(p, HarmonicKind::V1, ExteriorPoint(2.0), 2.0);
  const double m10 = potential_mass(p, HarmonicKind::V1, ExteriorPoint(2.0), 10.0);
  CHECK(m2 > 0.0);
  CHECK(m10 > m2);
}
