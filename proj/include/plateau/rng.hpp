#pragma once

#include <cstdint>
#include <random>

#include "plateau/symbols.hpp"

namespace plateau::rng {

// mt19937_64 plus hand-rolled output transforms. The engine is pinned by
// the standard; keeping the uniform/exponential/normal maps local makes a
// seeded run byte-identical across standard library implementations.
class Stream {
public:
  explicit Stream(std::uint64_t raw_seed) : engine_(raw_seed) {}

  double uniform() {  // open interval (0, 1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(2.0 * exponential());
    const double a = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// splitmix64 output function; used to spread (seed, index) pairs into
// decorrelated engine seeds for per-path substreams.
std::uint64_t mix64(std::uint64_t x);
Stream substream(std::uint64_t master_seed, std::uint64_t path_index);

// One-sided alpha-stable S with E[exp(-l S)] = exp(-l^alpha)
// (Kanter's representation).
double positive_stable(Stream& s, double alpha);

double gamma_variate(Stream& s, double shape, double rate);

// Inverse Gaussian with the (mean, shape) parametrization.
double inverse_gaussian_variate(Stream& s, double mean, double shape);

// Increment H_{s+ds} - H_s of the subordinator with the given symbol.
// identity: deterministic ds. tempered_stable uses exponential-tilting
// rejection, which needs ds * gamma^alpha small; past 5 the acceptance
// rate is out of reach and the call refuses.
double subordinator_increment(Stream& s, const symbols::SymbolSpec& spec,
                              double ds);

}  // namespace plateau::rng
