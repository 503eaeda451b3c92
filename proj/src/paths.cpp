#include "plateau/paths.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace plateau::paths {

namespace {

void append_increments(rng::Stream& stream, const symbols::SymbolSpec& spec,
                       double ds, std::size_t count,
                       std::vector<double>& values) {
  for (std::size_t i = 0; i < count; ++i) {
    const double inc = rng::subordinator_increment(stream, spec, ds);
    if (!(inc >= 0.0))
      throw NumericalToleranceError("negative subordinator increment");
    values.push_back(values.back() + inc);
  }
}

SamplePath finish(const symbols::SymbolSpec& spec, double ds,
                  std::uint64_t seed, const std::vector<double>& values) {
  SamplePath path{spec, ds, seed, Eigen::ArrayXd(values.size())};
  std::copy(values.begin(), values.end(), path.values.data());
  return path;
}

}  // namespace

SamplePath sample_subordinator(const symbols::SymbolSpec& spec, double ds,
                               double s_max, std::uint64_t seed) {
  if (!(ds > 0.0) || !(s_max >= ds))
    throw DomainError("sample_subordinator requires ds > 0 and s_max >= ds");
  const auto n = static_cast<std::size_t>(std::llround(s_max / ds));
  rng::Stream stream = rng::substream(seed, 0);
  std::vector<double> values;
  values.reserve(n + 1);
  values.push_back(0.0);
  append_increments(stream, spec, ds, n, values);
  return finish(spec, ds, seed, values);
}

SamplePath sample_subordinator_until(const symbols::SymbolSpec& spec,
                                     double ds, double t_goal,
                                     std::uint64_t seed, int max_doublings) {
  if (!(ds > 0.0) || !(t_goal > 0.0))
    throw DomainError("sample_subordinator_until requires ds, t_goal > 0");
  rng::Stream stream = rng::substream(seed, 0);
  std::vector<double> values;
  values.push_back(0.0);
  std::size_t block = 64;
  for (int d = 0; d <= max_doublings; ++d) {
    append_increments(stream, spec, ds, block, values);
    if (values.back() >= t_goal) return finish(spec, ds, seed, values);
    block *= 2;
  }
  throw HorizonError(
      "subordinator horizon budget exhausted before reaching the target "
      "passage level",
      ds * static_cast<double>(values.size()) * 2.0);
}

double inverse_path(const SamplePath& path, double t) {
  if (!(t >= 0.0)) throw DomainError("inverse_path requires t >= 0");
  if (t == 0.0) return 0.0;
  const double* begin = path.values.data();
  const double* end = begin + path.values.size();
  const double* it = std::lower_bound(begin, end, t);
  if (it == end) {
    std::ostringstream os;
    os << "passage level t=" << t << " exceeds the simulated horizon H("
       << path.s_max() << ")=" << path.horizon()
       << "; extend s_max (suggested " << 2.0 * path.s_max() << " or more)";
    throw HorizonError(os.str(),
                       path.s_max() *
                           std::max(2.0, t / std::max(path.horizon(), 1e-300)));
  }
  return path.s_at(it - begin);
}

Eigen::ArrayXd inverse_path(const SamplePath& path,
                            const Eigen::ArrayXd& t_grid) {
  Eigen::ArrayXd out(t_grid.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (i > 0 && t < t_grid[i - 1])
      throw DomainError("bulk inverse_path requires a nondecreasing t_grid");
    if (!(t >= 0.0)) throw DomainError("inverse_path requires t >= 0");
    if (t == 0.0) {
      out[i] = 0.0;
      continue;
    }
    while (k < path.values.size() && path.values[k] < t) ++k;
    if (k == path.values.size()) {
      std::ostringstream os;
      os << "passage level t=" << t << " exceeds the simulated horizon H("
         << path.s_max() << ")=" << path.horizon();
      throw HorizonError(
          os.str(), path.s_max() * std::max(2.0, t / std::max(path.horizon(),
                                                              1e-300)));
    }
    out[i] = path.s_at(k);
  }
  return out;
}

TimeChangedPath time_changed_path(const SamplePath& path,
                                  const std::function<double(double)>& v,
                                  const Eigen::ArrayXd& t_grid) {
  TimeChangedPath out;
  out.t_grid = t_grid;
  out.L_values = inverse_path(path, t_grid);
  out.v_of_L.resize(t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i)
    out.v_of_L[i] = v(out.L_values[i]);
  return out;
}

}  // namespace plateau::paths
