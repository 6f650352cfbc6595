#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature plus the few
// variable changes the rest of the library needs: semi-infinite ranges and
// algebraic endpoint behaviour.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stablecond/errors.hpp"

namespace stablecond {

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 500;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1) {
      raise(ErrorKind::DomainError, "quadrature tolerances must be positive");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208686099690, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
};

// One 21-point panel with the QUADPACK error heuristic.
template <class F>
Panel gk21(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resk = fc * kWgk[10];
  double resabs = std::fabs(resk);
  double resg = 0.0;
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double s = f1[j] + f2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
  }
  const double ah = std::fabs(half);
  resasc *= ah;
  resabs *= ah;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * half, err};
}

}  // namespace detail

// Adaptive bisection of the worst panel until the summed error estimate
// meets max(abs_tol, rel_tol*|I|). Never throws; see integrate().
template <class F>
QuadratureResult integrate_nothrow(F&& f, double a, double b, const QuadratureSettings& q) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<detail::Panel> panels;
  panels.reserve(static_cast<std::size_t>(q.max_subdivisions) + 1);
  panels.push_back(detail::gk21(f, a, b));
  auto by_error = [](const detail::Panel& l, const detail::Panel& r) { return l.error < r.error; };
  double total = panels.front().value;
  double error = panels.front().error;
  int splits = 0;
  while (true) {
    const double target = std::max(q.abs_tol, q.rel_tol * std::fabs(total));
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(total) || splits >= q.max_subdivisions) break;
    std::pop_heap(panels.begin(), panels.end(), by_error);
    const detail::Panel worst = panels.back();
    panels.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) break;  // cannot split further
    const detail::Panel left = detail::gk21(f, worst.a, mid);
    const detail::Panel right = detail::gk21(f, mid, worst.b);
    panels.push_back(left);
    std::push_heap(panels.begin(), panels.end(), by_error);
    panels.push_back(right);
    std::push_heap(panels.begin(), panels.end(), by_error);
    ++splits;
    // Re-sum instead of updating incrementally to avoid drift.
    total = 0.0;
    error = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      error += p.error;
    }
  }
  out.value = total;
  out.abs_error = error;
  out.subdivisions = splits;
  return out;
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSettings& q) {
  QuadratureResult r = integrate_nothrow(f, a, b, q);
  if (!r.converged || !std::isfinite(r.value)) {
    raise(ErrorKind::QuadratureFailure,
          "tolerance not met on [" + std::to_string(a) + ", " + std::to_string(b) +
              "], estimate " + std::to_string(r.value) + " +- " + std::to_string(r.abs_error));
  }
  return r.value;
}

// Integral over [a, inf) through x = a + t/(1-t).
template <class F>
double integrate_to_infinity(F&& f, double a, const QuadratureSettings& q) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double v = f(a + t / s);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  return integrate(g, 0.0, 1.0, q);
}

// Integral over [a, inf), a > 0, through x = a e^s; for power-law tails.
template <class F>
double integrate_to_infinity_log(F&& f, double a, const QuadratureSettings& q) {
  auto g = [&](double t) {
    const double s = 1.0 - t;
    const double x = a * std::exp(t / s);
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * x / (s * s);
  };
  return integrate(g, 0.0, 1.0, q);
}

// Integral over [a, b] through x = a + (b-a) w^k. With k = 1/(1+p) an
// integrand behaving like (x-a)^p becomes bounded and smooth at w = 0.
template <class F>
double integrate_left_power(F&& f, double a, double b, double k, const QuadratureSettings& q) {
  const double len = b - a;
  auto g = [&](double w) {
    const double wk1 = std::pow(w, k - 1.0);
    return f(a + len * w * wk1) * k * len * wk1;
  };
  return integrate(g, 0.0, 1.0, q);
}

// Mirror image of integrate_left_power for behaviour at the right endpoint.
template <class F>
double integrate_right_power(F&& f, double a, double b, double k, const QuadratureSettings& q) {
  const double len = b - a;
  auto g = [&](double w) {
    const double wk1 = std::pow(w, k - 1.0);
    return f(b - len * w * wk1) * k * len * wk1;
  };
  return integrate(g, 0.0, 1.0, q);
}

// Integral over [a, b] with 0 < a < b through x = e^s; suited to integrands
// with power-law decay over many decades.
template <class F>
double integrate_log(F&& f, double a, double b, const QuadratureSettings& q) {
  auto g = [&](double s) {
    const double x = std::exp(s);
    return f(x) * x;
  };
  return integrate(g, std::log(a), std::log(b), q);
}

}  // namespace stablecond
