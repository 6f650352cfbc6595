#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stablecond {

// Two-sided strictly stable process parameters. rho_hat is stored so that
// every downstream formula reads alpha*rho_hat without re-deriving it.
struct StableParams {
  double alpha = 1.0;
  double rho = 0.5;
  double rho_hat = 0.5;

  double alpha_rho() const { return alpha * rho; }
  double alpha_rho_hat() const { return alpha * rho_hat; }
  // The same process seen through x -> -x (or through duality).
  StableParams dual() const { return StableParams{alpha, rho_hat, rho}; }

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

StableParams validate_params(double alpha, double rho);

// Jump intensity per unit length at x != 0.
double levy_density(const StableParams& p, double x);

// Skewness of the standard stable law carrying the same positivity parameter.
double skewness_from_rho(const StableParams& p);

// Scale that makes the standard S(alpha, beta, sigma) law at time 1 have the
// Levy measure returned by levy_density.
double process_scale(const StableParams& p);

// Reproducible random source identified by (seed, stream_id).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Child stream for the index-th path of this stream. Distinct indices give
  // distinct, deterministic engines.
  RngStream substream(std::uint64_t index) const;

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Chambers-Mallows-Stuck draws with constants precomputed for one parameter
// set. unit() is a draw of xi_1; increments over dt scale by dt^(1/alpha).
class IncrementSampler {
 public:
  explicit IncrementSampler(const StableParams& p);

  double unit(RngStream& rng) const;
  double increment(double dt, RngStream& rng) const {
    return std::pow(dt, 1.0 / p_.alpha) * unit(rng);
  }
  const StableParams& params() const { return p_; }

 private:
  StableParams p_;
  bool cauchy_;
  double b_;      // arctan(beta tan(pi alpha / 2)) / alpha
  double scale_;  // (1 + beta^2 tan^2)^(1/(2 alpha)) * sigma
};

double sample_increment(const StableParams& p, double dt, RngStream& rng);

}  // namespace stablecond
