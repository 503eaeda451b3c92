#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "plateau/errors.hpp"
#include "plateau/rng.hpp"
#include "plateau/symbols.hpp"

namespace plateau::paths {

// Subordinator skeleton H(k ds), k = 0..n, H(0) = 0, nondecreasing.
// Exact ties can appear when an increment underflows the double range
// (gamma increments over tiny ds, say); the underlying path is strictly
// increasing, so ties are kept as floating-precision artifacts.
struct SamplePath {
  symbols::SymbolSpec spec;
  double ds = 0.0;
  std::uint64_t seed = 0;
  Eigen::ArrayXd values;

  Eigen::Index steps() const { return values.size() - 1; }
  double s_at(Eigen::Index k) const { return ds * static_cast<double>(k); }
  double s_max() const { return s_at(steps()); }
  double horizon() const { return values[steps()]; }
};

SamplePath sample_subordinator(const symbols::SymbolSpec& spec, double ds,
                               double s_max, std::uint64_t seed);

// Extends the operational horizon by geometric doubling until H exceeds
// t_goal; throws HorizonError when the doubling budget runs out.
SamplePath sample_subordinator_until(const symbols::SymbolSpec& spec,
                                     double ds, double t_goal,
                                     std::uint64_t seed,
                                     int max_doublings = 40);

// Right-continuous staircase inverse: smallest grid point s with
// H(s) >= t. Binary search, O(log n).
double inverse_path(const SamplePath& path, double t);

// Bulk inversion over a nondecreasing t_grid in one merged sweep.
Eigen::ArrayXd inverse_path(const SamplePath& path,
                            const Eigen::ArrayXd& t_grid);

struct TimeChangedPath {
  Eigen::ArrayXd t_grid;
  Eigen::ArrayXd L_values;
  Eigen::ArrayXd v_of_L;
};

TimeChangedPath time_changed_path(const SamplePath& path,
                                  const std::function<double(double)>& v,
                                  const Eigen::ArrayXd& t_grid);

}  // namespace plateau::paths
