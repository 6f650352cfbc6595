#include <algorithm>
#include <cmath>
#include <numbers>

#include "stablecond/errors.hpp"
#include "stablecond/quadrature.hpp"
#include "stablecond/tables.hpp"

namespace stablecond {

namespace {

constexpr double kPi = std::numbers::pi;
// The density of alpha < 1 bends sharply at the origin; the grid is uniform
// in asinh(y / kWidth).
constexpr double kWidth = 0.01;

// Density at z > 0 of the standard S1(alpha, beta) law, beta entering through
// theta0 = arctan(beta tan(pi alpha / 2)) / alpha.
double zolotarev_positive(double a, double theta0, double z) {
  const double lc0 = std::log(std::cos(a * theta0)) / (a - 1.0);
  const double e = a / (a - 1.0);
  auto log_v = [&](double t) {
    return lc0 + e * (std::log(std::cos(t)) - std::log(std::sin(a * (theta0 + t)))) +
           std::log(std::cos(a * theta0 + (a - 1.0) * t)) - std::log(std::cos(t));
  };
  const double lz = e * std::log(z);
  auto g = [&](double t) {
    const double lv = log_v(t);
    if (!std::isfinite(lv)) return 0.0;
    const double arg = lv + lz;
    if (arg > 700.0) return 0.0;
    return std::exp(lv - std::exp(arg));
  };
  const double lo = -theta0, hi = kPi / 2.0;
  // V is monotone; split at the peak of V exp(-z^e V), where z^e V = 1.
  double l = lo, r = hi;
  const bool increasing = a < 1.0;
  for (int i = 0; i < 200 && r - l > 1e-15 * (1.0 + std::fabs(l)); ++i) {
    const double m = 0.5 * (l + r);
    const double arg = log_v(m) + lz;
    if ((arg < 0.0) == increasing) {
      l = m;
    } else {
      r = m;
    }
  }
  const double mid = 0.5 * (l + r);
  QuadratureSettings q;
  q.rel_tol = 1e-11;
  q.abs_tol = 1e-300;
  q.max_subdivisions = 200;
  // The peak width is comparable to its distance from the nearer endpoint,
  // which can be tiny; integrate outwards from the peak on doubling panels.
  const double width = std::max(0.5 * std::min(mid - lo, hi - mid), 1e-300);
  double total = 0.0;
  for (int dir = -1; dir <= 1; dir += 2) {
    const double end = dir < 0 ? lo : hi;
    double inner = mid, len = width;
    while (inner != end) {
      double outer = inner + dir * len;
      if ((dir < 0 && outer <= end) || (dir > 0 && outer >= end) || len > 0.25) outer = end;
      const double piece = dir < 0 ? integrate_nothrow(g, outer, inner, q).value
                                   : integrate_nothrow(g, inner, outer, q).value;
      total += piece;
      if (outer != end && piece < 1e-18 * total) break;  // unimodal: the rest is negligible
      inner = outer;
      len *= 2.0;
    }
  }
  return a * std::exp(std::log(z) / (a - 1.0)) / (kPi * std::fabs(a - 1.0)) * total;
}

}  // namespace

UniformSpline::UniformSpline(double u0, double h, std::vector<double> values)
    : u0_(u0), h_(h), f_(std::move(values)) {
  if (f_.size() < 4 || !(h > 0.0)) raise(ErrorKind::GridFailure, "spline needs four points");
}

double UniformSpline::operator()(double u) const {
  const double x = (u - u0_) / h_;
  const auto n = static_cast<std::ptrdiff_t>(f_.size());
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
  const double t = x - static_cast<double>(i);
  const double p1 = f_[i], p2 = f_[i + 1];
  const double p0 = i > 0 ? f_[i - 1] : 2.0 * p1 - p2;
  const double p3 = i + 2 < n ? f_[i + 2] : 2.0 * p2 - p1;
  if (t < 0.0 || t > 1.0) return p1 + (p2 - p1) * t;  // linear outside the grid
  const double m1 = 0.5 * (p2 - p0), m2 = 0.5 * (p3 - p1);
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p1 + (t3 - 2 * t2 + t) * m1 + (-2 * t3 + 3 * t2) * p2 +
         (t3 - t2) * m2;
}

double StableDensity::pdf_direct(const StableParams& p, double y) {
  if (!std::isfinite(y)) return 0.0;
  if (p.alpha == 1.0) return 1.0 / (kPi * (1.0 + y * y));
  const double theta0 = kPi * (p.rho - 0.5);
  const double sigma = process_scale(p);
  const double z = y / sigma;
  if (z == 0.0) return std::tgamma(1.0 + 1.0 / p.alpha) * std::cos(theta0) / kPi;
  if (z > 0.0) return zolotarev_positive(p.alpha, theta0, z) / sigma;
  return zolotarev_positive(p.alpha, -theta0, -z) / sigma;
}

StableDensity::StableDensity(const StableParams& p)
    : p_(p), cauchy_(p.alpha == 1.0), y_max_(p.alpha < 1.0 ? 1e14 : 1e6) {
  if (cauchy_) return;
  const double h = 0.02;
  const double u_max = std::asinh(y_max_ / kWidth);
  const int n = static_cast<int>(std::ceil(2.0 * u_max / h)) + 1;
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = pdf_direct(p, kWidth * std::sinh(-u_max + h * i));
    if (!(f > 0.0) || !std::isfinite(f)) {
      raise(ErrorKind::GridFailure, "stable density not positive at grid node");
    }
    values[static_cast<std::size_t>(i)] = std::log(f);
  }
  log_pdf_ = UniformSpline(-u_max, h, std::move(values));
}

double StableDensity::pdf(double y) const {
  if (cauchy_) return 1.0 / (kPi * (1.0 + y * y));
  if (!std::isfinite(y)) return 0.0;
  if (std::fabs(y) >= y_max_) return levy_density(p_, y);
  return std::exp(log_pdf_(std::asinh(y / kWidth)));
}

}  // namespace stablecond
