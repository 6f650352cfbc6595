#include "stablecond/stable_model.hpp"

#include <numbers>
#include <string>

#include "stablecond/errors.hpp"

namespace stablecond {

namespace {
constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

StableParams validate_params(double alpha, double rho) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    raise(ErrorKind::OutOfRange, "alpha must lie in (0,2), got " + std::to_string(alpha));
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    raise(ErrorKind::OneSidedJumps, "rho must lie in (0,1), got " + std::to_string(rho));
  }
  if (alpha == 1.0 && rho != 0.5) {
    raise(ErrorKind::CauchyAsymmetric, "alpha = 1 requires rho = 1/2");
  }
  if (alpha > 1.0 && !(rho > 1.0 - 1.0 / alpha && rho < 1.0 / alpha)) {
    raise(ErrorKind::OneSidedJumps,
          "for alpha in (1,2) rho must lie strictly between 1-1/alpha and 1/alpha");
  }
  StableParams p{alpha, rho, 1.0 - rho};
  const double ar = p.alpha_rho(), arh = p.alpha_rho_hat();
  if (!(ar > 0.0 && ar < 1.0 && arh > 0.0 && arh < 1.0)) {
    raise(ErrorKind::OneSidedJumps, "alpha*rho and alpha*rho_hat must lie in (0,1)");
  }
  return p;
}

double levy_density(const StableParams& p, double x) {
  if (x == 0.0 || !std::isfinite(x)) raise(ErrorKind::DomainError, "levy_density needs x != 0");
  const double c = std::tgamma(p.alpha + 1.0) / kPi;
  const double s = x > 0.0 ? std::sin(kPi * p.alpha_rho()) : std::sin(kPi * p.alpha_rho_hat());
  return c * s / std::pow(std::fabs(x), p.alpha + 1.0);
}

double skewness_from_rho(const StableParams& p) {
  if (p.alpha == 1.0) return 0.0;
  return std::tan(kPi * p.alpha * (p.rho - 0.5)) / std::tan(kPi * p.alpha / 2.0);
}

double process_scale(const StableParams& p) {
  return std::pow(std::cos(kPi * p.alpha * (p.rho - 0.5)), 1.0 / p.alpha);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(index)));
}

double RngStream::exponential() { return -std::log(uniform()); }

IncrementSampler::IncrementSampler(const StableParams& p) : p_(p), cauchy_(p.alpha == 1.0) {
  if (cauchy_) {
    b_ = 0.0;
    scale_ = 1.0;
    return;
  }
  const double zeta = skewness_from_rho(p) * std::tan(kPi * p.alpha / 2.0);
  b_ = std::atan(zeta) / p.alpha;
  scale_ = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * p.alpha)) * process_scale(p);
}

double IncrementSampler::unit(RngStream& rng) const {
  const double v = kPi * (rng.uniform() - 0.5);
  if (cauchy_) return std::tan(v);
  const double w = rng.exponential();
  const double a = p_.alpha;
  const double t = a * (v + b_);
  return scale_ * std::sin(t) / std::pow(std::cos(v), 1.0 / a) *
         std::pow(std::cos(v - t) / w, (1.0 - a) / a);
}

double sample_increment(const StableParams& p, double dt, RngStream& rng) {
  if (!(dt > 0.0)) raise(ErrorKind::DomainError, "dt must be positive");
  return IncrementSampler(p).increment(dt, rng);
}

}  // namespace stablecond
