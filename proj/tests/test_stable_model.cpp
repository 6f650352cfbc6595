#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "stablecond/errors.hpp"
#include "stablecond/stable_model.hpp"
#include "stablecond/tables.hpp"

using namespace stablecond;
using Catch::Approx;

namespace {

ErrorKind kind_of(double a, double r) {
  try {
    validate_params(a, r);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("validate_params accepts interior points and fills rho_hat") {
  const auto p = validate_params(1.5, 0.45);
  CHECK(p.rho_hat == Approx(0.55));
  CHECK(p.alpha_rho() == Approx(0.675));
  CHECK(p.dual().rho == Approx(0.55));
  CHECK_NOTHROW(validate_params(1.0, 0.5));
  CHECK_NOTHROW(validate_params(0.5, 0.01));
}

TEST_CASE("validate_params rejects each bad region with its own kind") {
  CHECK(kind_of(2.0, 0.5) == ErrorKind::OutOfRange);
  CHECK(kind_of(0.0, 0.5) == ErrorKind::OutOfRange);
  CHECK(kind_of(0.5, 1.0) == ErrorKind::OneSidedJumps);
  CHECK(kind_of(0.5, 0.0) == ErrorKind::OneSidedJumps);
  CHECK(kind_of(1.0, 0.4) == ErrorKind::CauchyAsymmetric);
  // 1 - 1/alpha < rho < 1/alpha for alpha in (1, 2)
  CHECK(kind_of(1.5, 0.3) == ErrorKind::OneSidedJumps);
  CHECK(kind_of(1.5, 0.7) == ErrorKind::OneSidedJumps);
  CHECK(kind_of(std::nan(""), 0.5) == ErrorKind::OutOfRange);
}

TEST_CASE("Levy density and skewness closed forms") {
  // Gamma(3/2) sin(pi/4) / pi
  CHECK(levy_density(validate_params(0.5, 0.5), 1.0) == Approx(0.19947114).epsilon(1e-7));
  const auto p = validate_params(0.5, 0.3);
  CHECK(skewness_from_rho(p) == Approx(-0.3249196962).epsilon(1e-9));
  // Heavier tail on the side with the larger alpha*rho.
  CHECK(levy_density(p, 2.0) < levy_density(p, -2.0));
  CHECK(levy_density(p, 2.0) / levy_density(p, 4.0) == Approx(std::pow(2.0, 1.5)));
  CHECK_THROWS_AS(levy_density(p, 0.0), Error);
  CHECK(skewness_from_rho(validate_params(1.0, 0.5)) == 0.0);
}

TEST_CASE("RngStream is reproducible and substreams differ") {
  RngStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.uniform() != c.uniform());
  RngStream s1 = RngStream(7, 3).substream(0), s2 = RngStream(7, 3).substream(1);
  CHECK(s1.uniform() != s2.uniform());
  CHECK(RngStream(7, 3).substream(5).uniform() == RngStream(7, 3).substream(5).uniform());
}

TEST_CASE("increments scale as dt^(1/alpha)") {
  const auto p = validate_params(1.5, 0.45);
  IncrementSampler s(p);
  RngStream r1(1, 1), r2(1, 1);
  const double unit = s.unit(r1);
  CHECK(s.increment(0.01, r2) == Approx(std::pow(0.01, 1.0 / 1.5) * unit));
}

// Density values from inverting the characteristic function exp(-|t|^alpha
// e^{-i pi alpha (rho - 1/2) sgn t}) numerically.
TEST_CASE("stable density matches characteristic-function inversion") {
  const auto p = validate_params(0.5, 0.5);
  const StableDensity d(p);
  CHECK(d.pdf(-0.01) == Approx(0.632891292659).epsilon(1e-6));
  CHECK(d.pdf(0.013) == Approx(0.6304164609468).epsilon(1e-6));
  CHECK(StableDensity::pdf_direct(p, -0.01) == Approx(0.632891292659).epsilon(1e-8));
  const auto q = validate_params(0.5, 0.3);
  CHECK(StableDensity::pdf_direct(q, 0.1) == Approx(0.2880999630125608).epsilon(1e-8));
  CHECK(StableDensity(q).pdf(0.1) == Approx(0.2880999630125608).epsilon(1e-6));
}

TEST_CASE("stable density: Cauchy case, tails and scaling") {
  const auto c = validate_params(1.0, 0.5);
  CHECK(StableDensity(c).pdf(2.0) == Approx(1.0 / (std::numbers::pi * 5.0)));
  const auto p = validate_params(1.5, 0.45);
  const StableDensity d(p);
  // Far tail follows the Levy density.
  CHECK(d.pdf(200.0) == Approx(levy_density(p, 200.0)).epsilon(1e-3));
  CHECK(d.pdf(-2000.0) == Approx(levy_density(p, -2000.0)).epsilon(1e-3));
  CHECK(d.pdf(0.7, 0.25) == Approx(d.pdf(0.7 / std::pow(0.25, 1 / 1.5)) / std::pow(0.25, 1 / 1.5)));
  // Value at the origin: Gamma(1 + 1/alpha) cos(pi (rho - 1/2)) / pi.
  CHECK(d.pdf(0.0) ==
        Approx(std::tgamma(1.0 + 1.0 / 1.5) * std::cos(std::numbers::pi * -0.05) / std::numbers::pi)
            .epsilon(1e-6));
}

TEST_CASE("stable density integrates to one and puts mass rho on the right") {
  for (auto [a, r] : {std::pair{0.8, 0.4}, std::pair{1.5, 0.5}, std::pair{1.3, 0.6}}) {
    const auto p = validate_params(a, r);
    const StableDensity d(p);
    // Trapezoid in u = asinh(y) plus the tail integral of the Levy density.
    double left = 0.0, right = 0.0;
    const double umax = std::asinh(1e5), h = 1e-3;
    for (double u = h / 2; u < umax; u += h) {
      const double y = std::sinh(u), j = std::cosh(u) * h;
      right += d.pdf(y) * j;
      left += d.pdf(-y) * j;
    }
    right += levy_density(p, 1e5) * 1e5 / a;
    left += levy_density(p, -1e5) * 1e5 / a;
    CHECK(right == Approx(r).epsilon(2e-5));
    CHECK(left + right == Approx(1.0).epsilon(2e-5));
  }
}

TEST_CASE("sampler: P(xi_1 >= 0) = rho", "[mc]") {
  for (auto [a, r] : {std::pair{0.5, 0.3}, std::pair{1.5, 0.45}, std::pair{1.0, 0.5}}) {
    const auto p = validate_params(a, r);
    IncrementSampler s(p);
    RngStream rng(11, 2);
    const int n = 200000;
    int pos = 0;
    for (int i = 0; i < n; ++i) pos += s.unit(rng) >= 0.0;
    const double se = std::sqrt(r * (1 - r) / n);
    CHECK(std::fabs(pos / static_cast<double>(n) - r) < 4 * se);
  }
}

TEST_CASE("sampler: empirical CDF agrees with the density", "[mc]") {
  const auto p = validate_params(1.5, 0.45);
  const StableDensity d(p);
  IncrementSampler s(p);
  RngStream rng(3, 9);
  const int n = 200000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += s.unit(rng) <= 1.0;
  // P(0 <= xi_1 <= 1) by Simpson, plus P(xi_1 < 0) = rho_hat.
  double mass = 0.0;
  const int m = 2000;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    mass += w * d.pdf(static_cast<double>(i) / m);
  }
  mass /= 3.0 * m;
  const double expected = p.rho_hat + mass;
  CHECK(std::fabs(below / static_cast<double>(n) - expected) <
        4 * std::sqrt(expected * (1 - expected) / n));
}
