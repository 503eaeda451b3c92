#include "plateau/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#if defined(__GNUC__) && !defined(__clang__) && \
    defined(__SIZEOF_FLOAT128__) && __has_include(<quadmath.h>)
#define PLATEAU_HAVE_QUAD 1
#include <quadmath.h>
#endif

#include <Eigen/Dense>

#include "plateau/solver.hpp"
#include "plateau/special.hpp"

namespace plateau::mc {

namespace {

// Extended-precision scalar for the collocation solve. The graded moment
// columns span many orders of magnitude; double loses the high-order
// coefficients to rounding long before the truncation bias kicks in.
#ifdef PLATEAU_HAVE_QUAD
using wide = __float128;
inline wide wide_exp(wide x) { return expq(x); }
inline wide wide_log(wide x) { return logq(x); }
inline wide wide_lgamma(wide x) { return lgammaq(x); }
inline wide wide_sqrt(wide x) { return sqrtq(x); }
inline wide wide_abs(wide x) { return fabsq(x); }
const wide kWideEps = FLT128_EPSILON;
#else
using wide = long double;
inline wide wide_exp(wide x) { return expl(x); }
inline wide wide_log(wide x) { return logl(x); }
inline wide wide_lgamma(wide x) { return lgammal(x); }
inline wide wide_sqrt(wide x) { return sqrtl(x); }
inline wide wide_abs(wide x) { return fabsl(x); }
const wide kWideEps = LDBL_EPSILON;
#endif

constexpr Eigen::Index kBatch = 256;
constexpr std::uint64_t kMaxStepsPerPath = 200000000;

// Batches are dispatched to workers dynamically but each batch writes its
// own slot, and the final reduction walks slots in index order; the result
// is therefore independent of the thread count.
template <typename Slot, typename Fn>
void run_batches(Eigen::Index n, int threads, std::vector<Slot>& slots,
                 Fn&& per_batch) {
  const Eigen::Index batches = (n + kBatch - 1) / kBatch;
  slots.resize(static_cast<std::size_t>(batches));
  auto body = [&](Eigen::Index b) {
    const Eigen::Index lo = b * kBatch;
    const Eigen::Index hi = std::min(n, lo + kBatch);
    per_batch(lo, hi, slots[static_cast<std::size_t>(b)]);
  };
  if (threads <= 1 || batches == 1) {
    for (Eigen::Index b = 0; b < batches; ++b) body(b);
    return;
  }
  const int workers =
      static_cast<int>(std::min<Eigen::Index>(threads, batches));
  std::atomic<Eigen::Index> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        const Eigen::Index b = next.fetch_add(1);
        if (b >= batches) return;
        try {
          body(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          stop.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// First-passage inversion: L_out[i] = k ds for the first step k with
// H_k > t[i]. Targets must be sorted ascending.
void inverse_at_times(rng::Stream& stream, const symbols::SymbolSpec& spec,
                      double ds, const double* t, Eigen::Index m,
                      double* L_out) {
  double H = 0.0;
  std::uint64_t k = 0;
  Eigen::Index idx = 0;
  while (idx < m && t[idx] <= 0.0) L_out[idx++] = 0.0;  // L_0 = 0
  while (idx < m) {
    if (++k > kMaxStepsPerPath)
      throw HorizonError(
          "inverse walk exceeded the per-path step budget; increase ds or "
          "reduce the largest query time",
          static_cast<double>(k) * ds);
    H += rng::subordinator_increment(stream, spec, ds);
    while (idx < m && H > t[idx]) {
      L_out[idx] = static_cast<double>(k) * ds;
      ++idx;
    }
  }
}

void check_common(const std::function<double(double)>& v, Eigen::Index n,
                  double ds) {
  if (!v) throw DomainError("monte carlo estimator: v is empty");
  if (n < 2) throw DomainError("monte carlo estimator: need n >= 2 paths");
  if (!(ds > 0.0) || !std::isfinite(ds))
    throw DomainError("monte carlo estimator: ds must be positive and finite");
}

struct MomentSlot {
  double sum = 0.0;
  double sum2 = 0.0;
};

Estimate reduce_moments(const std::vector<MomentSlot>& slots, Eigen::Index n,
                        std::uint64_t seed) {
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& s : slots) {
    sum += s.sum;
    sum2 += s.sum2;
  }
  Estimate est;
  est.n = n;
  est.seed = seed;
  const auto dn = static_cast<double>(n);
  est.mean = sum / dn;
  est.variance = std::max(0.0, (sum2 - sum * sum / dn) / (dn - 1.0));
  est.std_error = std::sqrt(est.variance / dn);
  return est;
}

}  // namespace

double logistic_solution(double v0, double t) {
  if (!(v0 > 0.0) || !(v0 <= 1.0))
    throw DomainError("logistic_solution: v0 must lie in (0, 1]");
  return v0 / (v0 + (1.0 - v0) * std::exp(-t));
}

Estimate estimate_functional(const symbols::SymbolSpec& spec,
                             const std::function<double(double)>& v, double t,
                             Eigen::Index n, std::uint64_t seed, double ds,
                             int threads) {
  check_common(v, n, ds);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("estimate_functional: t must be >= 0 and finite");
  std::vector<MomentSlot> slots;
  run_batches(n, threads, slots,
              [&](Eigen::Index lo, Eigen::Index hi, MomentSlot& slot) {
                for (Eigen::Index i = lo; i < hi; ++i) {
                  rng::Stream stream =
                      rng::substream(seed, static_cast<std::uint64_t>(i));
                  double L = 0.0;
                  inverse_at_times(stream, spec, ds, &t, 1, &L);
                  const double value = v(L);
                  slot.sum += value;
                  slot.sum2 += value * value;
                }
              });
  return reduce_moments(slots, n, seed);
}

SigmaTable estimate_variance_sigma(const symbols::SymbolSpec& spec,
                                   const std::function<double(double)>& v,
                                   const Eigen::ArrayXd& t_grid,
                                   Eigen::Index n, std::uint64_t seed,
                                   double ds, int threads) {
  check_common(v, n, ds);
  const Eigen::Index m = t_grid.size();
  if (m < 1) throw DomainError("estimate_variance_sigma: empty time grid");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i]))
      throw DomainError("estimate_variance_sigma: grid times must be >= 0");
    if (i > 0 && t_grid[i] < t_grid[i - 1])
      throw DomainError("estimate_variance_sigma: grid must be nondecreasing");
  }

  struct GridSlot {
    Eigen::ArrayXd sum;
    Eigen::ArrayXd sum2;
    Eigen::Index count = 0;
  };
  std::vector<GridSlot> slots;
  run_batches(n, threads, slots,
              [&](Eigen::Index lo, Eigen::Index hi, GridSlot& slot) {
                slot.sum = Eigen::ArrayXd::Zero(m);
                slot.sum2 = Eigen::ArrayXd::Zero(m);
                slot.count = hi - lo;
                Eigen::ArrayXd L(m);
                for (Eigen::Index i = lo; i < hi; ++i) {
                  rng::Stream stream =
                      rng::substream(seed, static_cast<std::uint64_t>(i));
                  inverse_at_times(stream, spec, ds, t_grid.data(), m,
                                   L.data());
                  for (Eigen::Index j = 0; j < m; ++j) {
                    const double value = v(L[j]);
                    slot.sum[j] += value;
                    slot.sum2[j] += value * value;
                  }
                }
              });

  const auto dn = static_cast<double>(n);
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(m);
  Eigen::ArrayXd sum2 = Eigen::ArrayXd::Zero(m);
  Eigen::ArrayXd sig1 = Eigen::ArrayXd::Zero(m);
  Eigen::ArrayXd sig2 = Eigen::ArrayXd::Zero(m);
  Eigen::Index full_batches = 0;
  for (const auto& slot : slots) {
    sum += slot.sum;
    sum2 += slot.sum2;
    if (slot.count == kBatch) {
      const auto nb = static_cast<double>(slot.count);
      for (Eigen::Index j = 0; j < m; ++j) {
        const double var_b = std::max(
            0.0, (slot.sum2[j] - slot.sum[j] * slot.sum[j] / nb) / (nb - 1.0));
        sig1[j] += var_b;
        sig2[j] += var_b * var_b;
      }
      ++full_batches;
    }
  }

  SigmaTable table;
  table.t = t_grid;
  table.u_hat = sum / dn;
  table.sigma_hat.resize(m);
  table.stderr_u.resize(m);
  table.stderr_sigma.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double var =
        std::max(0.0, (sum2[j] - sum[j] * sum[j] / dn) / (dn - 1.0));
    table.sigma_hat[j] = var;  // the theorem's sigma is the variance itself
    table.stderr_u[j] = std::sqrt(var / dn);
    if (full_batches >= 2) {
      const auto nb = static_cast<double>(full_batches);
      const double var_sig =
          std::max(0.0, (sig2[j] - sig1[j] * sig1[j] / nb) / (nb - 1.0));
      table.stderr_sigma[j] = std::sqrt(var_sig / nb);
    } else {
      // Too few batches for batch means; Gaussian-theory approximation.
      table.stderr_sigma[j] = var * std::sqrt(2.0 / (dn - 1.0));
    }
  }
  return table;
}

Estimate estimate_restricted(const symbols::SymbolSpec& spec,
                             const std::function<double(double)>& v, double t,
                             double r, Eigen::Index n, std::uint64_t seed,
                             double ds, int threads) {
  check_common(v, n, ds);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("estimate_restricted: t must be >= 0 and finite");
  if (!(r > ds))
    throw DomainError("estimate_restricted: cutoff r must exceed ds");
  // L_t = k ds < r limits the walk to k < r / ds.
  const auto k_max = static_cast<std::uint64_t>(std::ceil(r / ds - 1e-9)) - 1;
  std::vector<MomentSlot> slots;
  run_batches(n, threads, slots,
              [&](Eigen::Index lo, Eigen::Index hi, MomentSlot& slot) {
                for (Eigen::Index i = lo; i < hi; ++i) {
                  rng::Stream stream =
                      rng::substream(seed, static_cast<std::uint64_t>(i));
                  double H = 0.0;
                  double value = 0.0;
                  for (std::uint64_t k = 1; k <= k_max; ++k) {
                    H += rng::subordinator_increment(stream, spec, ds);
                    if (H > t) {
                      value = v(static_cast<double>(k) * ds);
                      break;
                    }
                  }
                  slot.sum += value;
                  slot.sum2 += value * value;
                }
              });
  return reduce_moments(slots, n, seed);
}

Estimate estimate_occupation_integral(const symbols::SymbolSpec& spec,
                                      const std::function<double(double)>& v,
                                      double support_end, Eigen::Index n,
                                      std::uint64_t seed, double ds,
                                      int threads) {
  check_common(v, n, ds);
  if (!(support_end >= ds))
    throw DomainError(
        "estimate_occupation_integral: support must cover at least one step");
  const auto k_max =
      static_cast<std::uint64_t>(std::floor(support_end / ds + 1e-9));
  std::vector<MomentSlot> slots;
  run_batches(n, threads, slots,
              [&](Eigen::Index lo, Eigen::Index hi, MomentSlot& slot) {
                for (Eigen::Index i = lo; i < hi; ++i) {
                  rng::Stream stream =
                      rng::substream(seed, static_cast<std::uint64_t>(i));
                  double value = 0.0;
                  for (std::uint64_t k = 1; k <= k_max; ++k) {
                    const double inc =
                        rng::subordinator_increment(stream, spec, ds);
                    value += v(static_cast<double>(k) * ds) * inc;
                  }
                  slot.sum += value;
                  slot.sum2 += value * value;
                }
              });
  return reduce_moments(slots, n, seed);
}

ClosureReport theorem_closure(const symbols::SymbolSpec& spec, double u0,
                              double T, double dt, Eigen::Index n,
                              std::uint64_t seed, double ds, int threads) {
  if (!(u0 > 0.0 && u0 < 1.0))
    throw DomainError("theorem_closure: u0 must lie in (0, 1)");
  if (!(dt > 0.0) || !(T > 0.0))
    throw DomainError("theorem_closure: need T > 0 and dt > 0");
  const auto steps = static_cast<Eigen::Index>(std::llround(T / dt));
  if (steps < 10)
    throw DomainError("theorem_closure: need at least 10 grid steps");

  Eigen::ArrayXd t_grid(steps + 1);
  for (Eigen::Index j = 0; j <= steps; ++j)
    t_grid[j] = static_cast<double>(j) * dt;
  auto v = [u0](double x) { return logistic_solution(u0, x); };

  ClosureReport report;
  report.table =
      estimate_variance_sigma(spec, v, t_grid, n, seed, ds, threads);

  grid::GridFunction u;
  u.dt = dt;
  u.values = report.table.u_hat;
  solver::ConvolutionWeights w(spec, dt, steps);
  const Eigen::ArrayXd caputo = apply_caputo_type(w, u);
  report.residual = Eigen::ArrayXd::Zero(steps + 1);
  for (Eigen::Index j = 1; j <= steps; ++j) {
    const double uj = u.values[j];
    report.residual[j] =
        caputo[j] + report.table.sigma_hat[j] - uj * (1.0 - uj);
  }

  report.window_begin =
      std::max<Eigen::Index>(2, (steps + 9) / 10);  // t >= T/10
  double worst = 0.0;
  double stat = 0.0;
  // Noise amplification through the scheme: the dominant term is the
  // newest slope times W_1/dt; CRN makes nonadjacent contributions
  // second order.
  const double amp = 2.0 * w.cell(1) / dt;
  for (Eigen::Index j = report.window_begin; j <= steps; ++j) {
    worst = std::max(worst, std::abs(report.residual[j]));
    const double uj = u.values[j];
    stat = std::max(stat, report.table.stderr_u[j] *
                              (amp + std::abs(1.0 - 2.0 * uj)) +
                              report.table.stderr_sigma[j]);
  }
  report.max_residual = worst;
  report.stat_bound = stat;
  report.dt_bound = dt;
  report.threshold = 5.0 * (stat + dt);
  return report;
}

namespace {

// Least squares via Householder QR with column equilibration, in the wide
// scalar. A is rows x cols, column major, overwritten. Throws when a column
// collapses below the working precision.
std::vector<wide> wide_least_squares(std::vector<wide>& A,
                                     std::vector<wide>& b, int rows,
                                     int cols) {
  auto at = [&](int i, int j) -> wide& {
    return A[static_cast<std::size_t>(j) * rows + i];
  };
  const char* kBadGrid =
      "conjecture_search: collocation matrix is numerically rank deficient "
      "on this grid; reduce K, widen the time window, or add points";
  std::vector<wide> scale(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    wide s2 = 0;
    for (int i = 0; i < rows; ++i) s2 += at(i, j) * at(i, j);
    wide s = wide_sqrt(s2);
    if (!(s > 0)) throw NumericalToleranceError(kBadGrid);
    scale[static_cast<std::size_t>(j)] = s;
    for (int i = 0; i < rows; ++i) at(i, j) /= s;
  }
  for (int j = 0; j < cols; ++j) {
    wide norm2 = 0;
    for (int i = j; i < rows; ++i) norm2 += at(i, j) * at(i, j);
    wide norm = wide_sqrt(norm2);
    if (norm <= wide(1e6) * kWideEps)
      throw NumericalToleranceError(kBadGrid);
    wide alpha = at(j, j) >= 0 ? -norm : norm;
    wide v0 = at(j, j) - alpha;
    wide vnorm2 = norm2 - at(j, j) * at(j, j) + v0 * v0;
    if (!(vnorm2 > 0)) {
      at(j, j) = alpha;
      continue;
    }
    // Reflector stored implicitly: v = (v0, A(j+1..,j)).
    std::vector<wide> v(static_cast<std::size_t>(rows - j));
    v[0] = v0;
    for (int i = j + 1; i < rows; ++i)
      v[static_cast<std::size_t>(i - j)] = at(i, j);
    const wide beta = wide(2) / vnorm2;
    for (int jj = j; jj < cols; ++jj) {
      wide dot = 0;
      for (int i = j; i < rows; ++i)
        dot += v[static_cast<std::size_t>(i - j)] * at(i, jj);
      dot *= beta;
      for (int i = j; i < rows; ++i)
        at(i, jj) -= dot * v[static_cast<std::size_t>(i - j)];
    }
    wide dot = 0;
    for (int i = j; i < rows; ++i)
      dot += v[static_cast<std::size_t>(i - j)] * b[static_cast<std::size_t>(i)];
    dot *= beta;
    for (int i = j; i < rows; ++i)
      b[static_cast<std::size_t>(i)] -= dot * v[static_cast<std::size_t>(i - j)];
    at(j, j) = alpha;
  }
  std::vector<wide> x(static_cast<std::size_t>(cols));
  for (int j = cols - 1; j >= 0; --j) {
    wide acc = b[static_cast<std::size_t>(j)];
    for (int jj = j + 1; jj < cols; ++jj)
      acc -= at(j, jj) * x[static_cast<std::size_t>(jj)];
    if (wide_abs(at(j, j)) <= wide(1e6) * kWideEps)
      throw NumericalToleranceError(kBadGrid);
    x[static_cast<std::size_t>(j)] = acc / at(j, j);
  }
  for (int j = 0; j < cols; ++j)
    x[static_cast<std::size_t>(j)] /= scale[static_cast<std::size_t>(j)];
  return x;
}

}  // namespace

ConjectureFit conjecture_search(const symbols::SymbolSpec& spec, double u0,
                                int K, const Eigen::ArrayXd& t_grid,
                                double ridge) {
  if (!(u0 > 0.0 && u0 < 1.0))
    throw DomainError("conjecture_search: u0 must lie in (0, 1)");
  if (K < 1) throw DomainError("conjecture_search: K must be >= 1");
  if (ridge < 0.0)
    throw DomainError("conjecture_search: ridge must be nonnegative");
  const int m = static_cast<int>(t_grid.size());
  for (int i = 0; i < m; ++i)
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]))
      throw DomainError("conjecture_search: grid times must be positive");
  const int unknowns = K - 1;
  if (m < unknowns)
    throw DomainError(
        "conjecture_search: need at least K - 1 collocation points");

  // Moment table in the wide scalar. The identity and stable ladders have
  // closed forms that stay exact in wide precision; other families go
  // through the double-precision Laplace inversion and are upcast.
  using symbols::Family;
  const bool closed_ladder = spec.family() == Family::identity ||
                             spec.family() == Family::stable;
  const double alpha_eff =
      spec.family() == Family::stable ? spec.alpha() : 1.0;
  std::vector<wide> P(static_cast<std::size_t>(m) * (K + 1));
  auto pat = [&](int i, int k) -> wide& {
    return P[static_cast<std::size_t>(k) * m + i];
  };
  for (int k = 0; k <= K; ++k)
    for (int i = 0; i < m; ++i) {
      if (closed_ladder) {
        const wide ak = wide(alpha_eff) * wide(k);
        pat(i, k) = k == 0 ? wide(1)
                           : wide_exp(ak * wide_log(wide(t_grid[i])) -
                                      wide_lgamma(ak + wide(1)));
      } else {
        pat(i, k) = wide(special::moment_phi_k(spec, k, t_grid[i]));
      }
    }

  std::vector<wide> c(static_cast<std::size_t>(K + 1), wide(0));
  c[0] = wide(u0);
  c[1] = wide(u0) * (wide(1) - wide(u0));

  auto fill_ubar = [&](std::vector<wide>& ubar) {
    for (int i = 0; i < m; ++i) {
      wide acc = 0;
      for (int k = 0; k <= K; ++k)
        acc += c[static_cast<std::size_t>(k)] * pat(i, k);
      ubar[static_cast<std::size_t>(i)] = acc;
    }
  };
  auto fill_residual = [&](const std::vector<wide>& ubar,
                           std::vector<wide>& r) {
    for (int i = 0; i < m; ++i) {
      wide lhs = 0;
      for (int k = 1; k <= K; ++k)
        lhs += c[static_cast<std::size_t>(k)] * pat(i, k - 1);
      const wide u = ubar[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] = lhs - u + u * u;
    }
  };

  std::vector<wide> ubar(static_cast<std::size_t>(m));
  std::vector<wide> r(static_cast<std::size_t>(m));
  int iters = 0;
  if (unknowns > 0) {
    const int rows = ridge > 0.0 ? m + unknowns : m;
    const wide sqreg = ridge > 0.0 ? wide_sqrt(wide(ridge)) : wide(0);
    for (; iters < 100; ++iters) {
      fill_ubar(ubar);
      fill_residual(ubar, r);
      std::vector<wide> A(static_cast<std::size_t>(rows) * unknowns,
                          wide(0));
      std::vector<wide> rhs(static_cast<std::size_t>(rows), wide(0));
      for (int j = 2; j <= K; ++j)
        for (int i = 0; i < m; ++i)
          A[static_cast<std::size_t>(j - 2) * rows + i] =
              pat(i, j - 1) - pat(i, j) +
              wide(2) * ubar[static_cast<std::size_t>(i)] * pat(i, j);
      for (int i = 0; i < m; ++i)
        rhs[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
      if (ridge > 0.0)
        for (int j = 0; j < unknowns; ++j) {
          A[static_cast<std::size_t>(j) * rows + m + j] = sqreg;
          rhs[static_cast<std::size_t>(m + j)] =
              -sqreg * c[static_cast<std::size_t>(j + 2)];
        }
      std::vector<wide> delta = wide_least_squares(A, rhs, rows, unknowns);
      wide max_delta = 0;
      wide max_c = 0;
      for (int j = 0; j < unknowns; ++j) {
        c[static_cast<std::size_t>(j + 2)] +=
            delta[static_cast<std::size_t>(j)];
        max_delta =
            std::max(max_delta, wide_abs(delta[static_cast<std::size_t>(j)]));
      }
      for (int k = 0; k <= K; ++k)
        max_c = std::max(max_c, wide_abs(c[static_cast<std::size_t>(k)]));
      if (max_c > wide(1e6))
        throw NumericalToleranceError(
            "conjecture_search: collocation iteration diverged; reduce K or "
            "move the grid inside the trust interval");
      if (max_delta <= wide(1e-14) * (wide(1) + max_c)) {
        ++iters;
        break;
      }
    }
  }

  fill_ubar(ubar);
  fill_residual(ubar, r);
  ConjectureFit fit;
  fit.coefficients.resize(K + 1);
  for (int k = 0; k <= K; ++k)
    fit.coefficients[k] = static_cast<double>(c[static_cast<std::size_t>(k)]);
  fit.t_grid = t_grid;
  fit.residuals.resize(m);
  for (int i = 0; i < m; ++i)
    fit.residuals[i] = static_cast<double>(r[static_cast<std::size_t>(i)]);
  fit.iterations = iters;
  return fit;
}

}  // namespace plateau::mc
