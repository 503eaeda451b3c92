#include "plateau/rng.hpp"

#include <cmath>

#include "plateau/errors.hpp"

namespace plateau::rng {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Stream substream(std::uint64_t master_seed, std::uint64_t path_index) {
  return Stream(mix64(master_seed ^ mix64(path_index)));
}

double positive_stable(Stream& s, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw DomainError("positive_stable requires alpha in (0, 1)");
  const double u = s.uniform();
  const double e = s.exponential();
  // A(u) = [sin(a pi u)^a sin((1-a) pi u)^{1-a} / sin(pi u)]^{1/(1-a)},
  // S = (A(U)/E)^{(1-a)/a}; assembled in log space.
  const double log_a =
      (alpha * std::log(std::sin(alpha * kPi * u)) +
       (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * kPi * u)) -
       std::log(std::sin(kPi * u))) /
      (1.0 - alpha);
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
}

double gamma_variate(Stream& s, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw DomainError("gamma_variate requires shape > 0 and rate > 0");
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(s.uniform(), 1.0 / shape);
    shape += 1.0;
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = s.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

double inverse_gaussian_variate(Stream& s, double mean, double shape) {
  if (!(mean > 0.0) || !(shape > 0.0))
    throw DomainError("inverse_gaussian_variate requires mean, shape > 0");
  // Michael-Schucany-Haas two-root method.
  const double z = s.normal();
  const double v = z * z;
  const double x = mean + mean * mean * v / (2.0 * shape) -
                   mean / (2.0 * shape) *
                       std::sqrt(4.0 * mean * shape * v + mean * mean * v * v);
  if (s.uniform() <= mean / (mean + x)) return x;
  return mean * mean / x;
}

double subordinator_increment(Stream& s, const symbols::SymbolSpec& spec,
                              double ds) {
  if (!(ds > 0.0)) throw DomainError("subordinator increment requires ds > 0");
  using symbols::Family;
  switch (spec.family()) {
    case Family::identity:
      return ds;
    case Family::stable:
      return std::pow(ds, 1.0 / spec.alpha()) * positive_stable(s, spec.alpha());
    case Family::tempered_stable: {
      const double a = spec.alpha();
      const double g = spec.tempering();
      const double cost = ds * std::pow(g, a);
      if (cost > 5.0)
        throw CapabilityError(
            "tempered_stable increment: ds * gamma^alpha too large for "
            "rejection sampling; refine the step");
      const double scale = std::pow(ds, 1.0 / a);
      for (;;) {
        const double jump = scale * positive_stable(s, a);
        if (s.uniform() <= std::exp(-g * jump)) return jump;
      }
    }
    case Family::gamma:
      return gamma_variate(s, spec.gamma_shape() * ds, spec.gamma_rate());
    case Family::inverse_gaussian: {
      const double mu = spec.ig_mu();
      const double sg = spec.ig_sigma();
      return inverse_gaussian_variate(s, ds / mu, (ds / sg) * (ds / sg));
    }
    case Family::custom:
      throw CapabilityError(
          "custom symbols do not carry an increment sampler");
  }
  throw DomainError("unknown symbol family");
}

}  // namespace plateau::rng
