#pragma once

#include <cmath>
#include <vector>

#include "stablecond/harmonic.hpp"

namespace stablecond {

// Catmull-Rom interpolation of samples on a uniform grid u0 + i*h.
class UniformSpline {
 public:
  UniformSpline() = default;
  UniformSpline(double u0, double h, std::vector<double> values);

  double operator()(double u) const;
  double front() const { return u0_; }
  double back() const { return u0_ + h_ * static_cast<double>(f_.size() - 1); }
  const std::vector<double>& values() const { return f_; }

 private:
  double u0_ = 0.0, h_ = 1.0;
  std::vector<double> f_;
};

// Density of xi_1 for the process with the given parameters, computed from
// Zolotarev's integral representation and tabulated in log form on an asinh
// grid; beyond the grid the leading tail term (the Levy density) is used.
class StableDensity {
 public:
  explicit StableDensity(const StableParams& p);

  double pdf(double y) const;
  // Density of xi_dt at y.
  double pdf(double y, double dt) const {
    const double s = std::pow(dt, 1.0 / p_.alpha);
    return pdf(y / s) / s;
  }
  const StableParams& params() const { return p_; }

  // Direct evaluation without the table; slow.
  static double pdf_direct(const StableParams& p, double y);

 private:
  StableParams p_;
  bool cauchy_;
  double y_max_;
  UniformSpline log_pdf_;
};

// Tabulated log h for one harmonic function on each side of [-1, 1], in the
// variable log(|y| - 1). Linear extrapolation of log h beyond both ends
// matches the power-law behaviour at the boundary and at infinity.
class HarmonicTable {
 public:
  HarmonicTable(const StableParams& p, HarmonicKind kind, double min_offset = 1e-12,
                double max_offset = 1e8, double step = 0.02);

  double operator()(double y) const { return std::exp(log_value(y)); }
  double log_value(double y) const;
  // Local exponent d log h / d log(|y|-1) at y.
  double boundary_exponent(double y) const;
  // sup of h over {sign*y >= 1 + a}.
  double sup_beyond(int sign, double a) const;
  HarmonicKind kind() const { return kind_; }

 private:
  HarmonicKind kind_;
  UniformSpline pos_, neg_;
  std::vector<double> pos_suffix_max_, neg_suffix_max_;
};

}  // namespace stablecond
