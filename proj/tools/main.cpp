// plateau: command line driver for the non-local logistic toolkit.
//
// Subcommands map onto the library modules: symbols/special/series expose
// the deterministic machinery, simulate/figure1/mc the probabilistic side,
// solve/verify the discretized equation and its consistency checks.
//
// Exit codes: 0 ok, 2 usage or config error, 3 tolerance failure,
// 4 capability limit (horizon or sampler), 1 unexpected.

#include "CLI11.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include <plateau/csv.hpp>
#include <plateau/errors.hpp>
#include <plateau/grid.hpp>
#include <plateau/mc.hpp>
#include <plateau/paths.hpp>
#include <plateau/series.hpp>
#include <plateau/solver.hpp>
#include <plateau/special.hpp>
#include <plateau/symbols.hpp>
#include <plateau/version.hpp>

#include "config.hpp"
#include "manifest.hpp"

namespace {

std::string g_command_line;
std::string g_config_path;
tool::ConfigFile g_config;
std::vector<std::string> g_accepted_keys;

std::string fd(double x) { return plateau::csv::format_double(x); }

template <typename T>
T parse_config_value(const std::string& key, const std::string& raw) {
  const std::string bad =
      "config: invalid value for key '" + key + "': '" + raw + "'";
  if constexpr (std::is_same_v<T, std::string>) {
    return raw;
  } else if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
      throw plateau::ConfigError(bad);
    return static_cast<T>(v);
  } else if constexpr (std::is_unsigned_v<T>) {
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
    if (raw.find('-') != std::string::npos || end == raw.c_str() ||
        *end != '\0' || errno == ERANGE ||
        v > std::numeric_limits<T>::max())
      throw plateau::ConfigError(bad);
    return static_cast<T>(v);
  } else {
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0' || errno == ERANGE ||
        v > static_cast<long long>(std::numeric_limits<T>::max()) ||
        v < static_cast<long long>(std::numeric_limits<T>::min()))
      throw plateau::ConfigError(bad);
    return static_cast<T>(v);
  }
}

// Registers a config-backed option. The config file supplies the default;
// a command line flag overrides it. File path options stay CLI-only.
template <typename T>
CLI::Option* opt_cfg(CLI::App* cmd, const std::string& flag, T& field,
                     const std::string& desc, const std::string& key) {
  g_accepted_keys.push_back(key);
  if (const std::string* v = g_config.find(key))
    field = parse_config_value<T>(key, *v);
  return cmd->add_option(flag, field, desc)->capture_default_str();
}

void add_config_flag(CLI::App* cmd) {
  cmd->add_option("--config", g_config_path,
                  "flat key=value file supplying defaults for optional flags");
}

// Explicit flag beats PLATEAU_SEED, which beats the config/built-in default.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
  if (opt != nullptr && opt->count() > 0) return value;
  if (const char* env = std::getenv("PLATEAU_SEED")) {
    char* end = nullptr;
    errno = 0;
    unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || errno == ERANGE ||
        std::string(env).find('-') != std::string::npos)
      throw plateau::ConfigError(
          "PLATEAU_SEED must be a nonnegative integer, got '" +
          std::string(env) + "'");
    return parsed;
  }
  return value;
}

int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// ---- family plumbing -------------------------------------------------

struct FamilyArgs {
  std::string family = "stable";
  double alpha = 0.5;
  double tempering = 1.0;
  double a = 1.0;
  double b = 1.0;
  double sigma = 1.0;
  double mu = 1.0;
};

// sigma_taken: the solve command uses --sigma for its correction table,
// so the inverse Gaussian scale moves to --sigma-ig there.
void add_family(CLI::App* cmd, FamilyArgs& fa, bool sigma_taken = false) {
  opt_cfg(cmd, "--family", fa.family,
          "identity, stable, tempered_stable, gamma, inverse_gaussian",
          "family");
  opt_cfg(cmd, "--alpha", fa.alpha, "stability index in (0,1)", "alpha");
  opt_cfg(cmd, "--gamma", fa.tempering, "tempering rate (tempered_stable)",
          "gamma");
  opt_cfg(cmd, "--a", fa.a, "gamma subordinator shape rate", "a");
  opt_cfg(cmd, "--b", fa.b, "gamma subordinator inverse scale", "b");
  opt_cfg(cmd, sigma_taken ? "--sigma-ig" : "--sigma", fa.sigma,
          "inverse Gaussian diffusion scale", "sigma");
  opt_cfg(cmd, "--mu", fa.mu, "inverse Gaussian drift", "mu");
}

plateau::symbols::SymbolSpec make_spec(const FamilyArgs& fa) {
  using plateau::symbols::SymbolSpec;
  if (fa.family == "identity") return SymbolSpec::identity();
  if (fa.family == "stable") return SymbolSpec::stable(fa.alpha);
  if (fa.family == "tempered_stable")
    return SymbolSpec::tempered_stable(fa.alpha, fa.tempering);
  if (fa.family == "gamma") return SymbolSpec::gamma(fa.a, fa.b);
  if (fa.family == "inverse_gaussian")
    return SymbolSpec::inverse_gaussian(fa.sigma, fa.mu);
  if (fa.family == "custom")
    throw plateau::DomainError(
        "custom symbols are a library-level feature; the command line "
        "exposes the named families only");
  throw plateau::DomainError(
      "unknown family '" + fa.family +
      "'; expected identity, stable, tempered_stable, gamma, or "
      "inverse_gaussian");
}

void base_meta(plateau::csv::Table& t, const std::string& command) {
  t.metadata.emplace_back("tool", "plateau");
  t.metadata.emplace_back("version", plateau::kVersion);
  t.metadata.emplace_back("command", command);
}

void family_meta(plateau::csv::Table& t, const FamilyArgs& fa) {
  t.metadata.emplace_back("family", fa.family);
  if (fa.family == "stable" || fa.family == "tempered_stable")
    t.metadata.emplace_back("alpha", fd(fa.alpha));
  if (fa.family == "tempered_stable")
    t.metadata.emplace_back("gamma", fd(fa.tempering));
  if (fa.family == "gamma") {
    t.metadata.emplace_back("a", fd(fa.a));
    t.metadata.emplace_back("b", fd(fa.b));
  }
  if (fa.family == "inverse_gaussian") {
    t.metadata.emplace_back("sigma", fd(fa.sigma));
    t.metadata.emplace_back("mu", fd(fa.mu));
  }
}

// ---- test functions for the probabilistic commands -------------------

struct VArgs {
  std::string kind = "logistic";
  double v0 = 0.5;
  double decay = 1.0;
  double power = 1.0;
};

void add_v(CLI::App* cmd, VArgs& va) {
  opt_cfg(cmd, "--v", va.kind, "test function: logistic, exp, power", "v");
  opt_cfg(cmd, "--v0", va.v0, "logistic initial value in (0,1]", "v0");
  opt_cfg(cmd, "--decay", va.decay, "rate for v(x) = exp(-decay x)", "decay");
  opt_cfg(cmd, "--power", va.power, "exponent for v(x) = x^power", "power");
}

std::function<double(double)> make_v(const VArgs& va) {
  if (va.kind == "logistic") {
    double v0 = va.v0;
    plateau::mc::logistic_solution(v0, 0.0);
    return [v0](double x) { return plateau::mc::logistic_solution(v0, x); };
  }
  if (va.kind == "exp") {
    double d = va.decay;
    if (!(d > 0.0))
      throw plateau::DomainError("decay must be positive");
    return [d](double x) { return std::exp(-d * x); };
  }
  if (va.kind == "power") {
    double p = va.power;
    if (!(p >= 0.0))
      throw plateau::DomainError("power must be nonnegative");
    return [p](double x) { return std::pow(x, p); };
  }
  throw plateau::DomainError("unknown test function '" + va.kind +
                             "'; expected logistic, exp, or power");
}

void v_meta(plateau::csv::Table& t, const VArgs& va) {
  t.metadata.emplace_back("v", va.kind);
  if (va.kind == "logistic") t.metadata.emplace_back("v0", fd(va.v0));
  if (va.kind == "exp") t.metadata.emplace_back("decay", fd(va.decay));
  if (va.kind == "power") t.metadata.emplace_back("power", fd(va.power));
}

// ---- output plumbing --------------------------------------------------

void emit_table(const plateau::csv::Table& table, const std::string& out,
                bool has_seed, std::uint64_t seed, const std::string& started,
                const std::vector<std::string>& extra_outputs = {}) {
  if (out.empty()) {
    plateau::csv::write(std::cout, table);
    return;
  }
  plateau::csv::write_file(out, table);
  tool::RunManifest m;
  m.command_line = g_command_line;
  m.config = g_config.entries();
  m.has_seed = has_seed;
  m.seed = seed;
  m.started_at = started;
  m.finished_at = tool::utc_now_iso8601();
  m.output_paths.push_back(out);
  for (const auto& p : extra_outputs) m.output_paths.push_back(p);
  tool::write_manifest(out, m);
}

const std::string* meta_find(const plateau::csv::Table& t,
                             const std::string& key) {
  for (const auto& kv : t.metadata)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

int header_index(const plateau::csv::Table& t, const std::string& name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  return it == t.header.end()
             ? -1
             : static_cast<int>(it - t.header.begin());
}

Eigen::Index checked_steps(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw plateau::DomainError("T and dt must be positive");
  auto steps = static_cast<Eigen::Index>(std::llround(T / dt));
  if (steps < 1)
    throw plateau::DomainError("T must be at least dt");
  return steps;
}

// ---- symbols eval ------------------------------------------------------

struct SymbolsEvalArgs {
  FamilyArgs fam;
  std::vector<double> lambdas;
  std::vector<double> zs;
  std::string out;
};

void run_symbols_eval(const SymbolsEvalArgs& a) {
  std::string started = tool::utc_now_iso8601();
  if (a.lambdas.empty() == a.zs.empty())
    throw plateau::DomainError(
        "symbols eval needs exactly one of --lambda (symbol values) or "
        "--z (tail values)");
  auto spec = make_spec(a.fam);
  plateau::csv::Table t;
  base_meta(t, "symbols eval");
  family_meta(t, a.fam);
  if (!a.lambdas.empty()) {
    t.header = {"lambda", "phi", "phi_over_lambda"};
    for (double lam : a.lambdas) {
      if (!(lam >= 0.0))
        throw plateau::DomainError("lambda must be nonnegative");
      double p = plateau::symbols::phi(spec, lam);
      double ratio = lam == 0.0
                         ? plateau::symbols::phi_over_lambda_limit(spec)
                         : p / lam;
      t.rows.push_back({fd(lam), fd(p), fd(ratio)});
    }
  } else {
    plateau::symbols::TailKernel kernel(spec);
    t.header = {"z", "tail"};
    for (double z : a.zs) {
      if (!(z > 0.0)) throw plateau::DomainError("z must be positive");
      t.rows.push_back({fd(z), fd(kernel(z))});
    }
  }
  emit_table(t, a.out, false, 0, started);
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  FamilyArgs fam;
  double ds = 1e-3;
  double smax = 10.0;
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_simulate(const SimulateArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  auto path = plateau::paths::sample_subordinator(spec, a.ds, a.smax, seed);
  plateau::csv::Table t;
  base_meta(t, "simulate");
  family_meta(t, a.fam);
  t.metadata.emplace_back("ds", fd(a.ds));
  t.metadata.emplace_back("smax", fd(a.smax));
  t.metadata.emplace_back("seed", std::to_string(seed));
  t.header = {"s", "H"};
  for (Eigen::Index k = 0; k <= path.steps(); ++k)
    t.rows.push_back({fd(path.s_at(k)), fd(path.values[k])});
  emit_table(t, a.out, true, seed, started);
}

// ---- figure1 -----------------------------------------------------------

std::string companion_path(const std::string& out, const std::string& tag) {
  auto dot = out.rfind('.');
  auto slash = out.find_last_of("/\\");
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return out + tag + ".csv";
  return out.substr(0, dot) + tag + out.substr(dot);
}

struct Figure1Args {
  double v0 = 0.1;
  double alpha = 0.5;
  double ds = 1e-3;
  double smax = 10.0;
  long long steps = 2000;
  std::uint64_t seed = 7;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_figure1(const Figure1Args& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = plateau::symbols::SymbolSpec::stable(a.alpha);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  if (a.steps < 1) throw plateau::DomainError("steps must be at least 1");
  plateau::mc::logistic_solution(a.v0, 0.0);
  auto v = [&a](double x) { return plateau::mc::logistic_solution(a.v0, x); };

  auto path = plateau::paths::sample_subordinator(spec, a.ds, a.smax, seed);
  double horizon = path.horizon();
  Eigen::ArrayXd t_grid =
      Eigen::ArrayXd::LinSpaced(a.steps + 1, 0.0, horizon);
  auto tc = plateau::paths::time_changed_path(path, v, t_grid);

  plateau::csv::Table t;
  base_meta(t, "figure1");
  t.metadata.emplace_back("family", "stable");
  t.metadata.emplace_back("alpha", fd(a.alpha));
  t.metadata.emplace_back("v0", fd(a.v0));
  t.metadata.emplace_back("ds", fd(a.ds));
  t.metadata.emplace_back("smax", fd(a.smax));
  t.metadata.emplace_back("steps", std::to_string(a.steps));
  t.metadata.emplace_back("seed", std::to_string(seed));
  t.metadata.emplace_back("horizon", fd(horizon));
  t.header = {"t", "L", "v_of_L"};
  for (Eigen::Index j = 0; j < tc.t_grid.size(); ++j)
    t.rows.push_back(
        {fd(tc.t_grid[j]), fd(tc.L_values[j]), fd(tc.v_of_L[j])});

  // Companion panel: the undelayed curve v on the operational clock.
  std::string vpath = companion_path(a.out, "_v");
  plateau::csv::Table tv;
  base_meta(tv, "figure1");
  tv.metadata.emplace_back("panel", "v");
  tv.metadata.emplace_back("v0", fd(a.v0));
  tv.header = {"s", "v"};
  for (Eigen::Index k = 0; k <= path.steps(); ++k)
    tv.rows.push_back({fd(path.s_at(k)), fd(v(path.s_at(k)))});
  plateau::csv::write_file(vpath, tv);

  emit_table(t, a.out, true, seed, started, {vpath});
}

// ---- special -----------------------------------------------------------

struct SpecialMlArgs {
  double alpha = 0.5;
  std::vector<double> zs;
  std::string out;
};

void run_special_ml(const SpecialMlArgs& a) {
  std::string started = tool::utc_now_iso8601();
  plateau::csv::Table t;
  base_meta(t, "special ml");
  t.metadata.emplace_back("alpha", fd(a.alpha));
  t.header = {"input", "value", "method"};
  for (double z : a.zs) {
    double value = plateau::special::mittag_leffler(a.alpha, z);
    std::string method = a.alpha == 1.0 ? "exp"
                         : z < -1.0    ? "integral"
                                       : "series";
    t.rows.push_back({fd(z), fd(value), method});
  }
  emit_table(t, a.out, false, 0, started);
}

struct SpecialPhikArgs {
  FamilyArgs fam;
  int k = 1;
  std::vector<double> ts;
  std::string method = "auto";
  std::string out;
};

void run_special_phik(const SpecialPhikArgs& a) {
  std::string started = tool::utc_now_iso8601();
  if (a.k < 0) throw plateau::DomainError("k must be nonnegative");
  auto spec = make_spec(a.fam);
  plateau::csv::Table t;
  base_meta(t, "special phik");
  family_meta(t, a.fam);
  t.metadata.emplace_back("k", std::to_string(a.k));
  t.header = {"input", "value", "method"};
  using plateau::special::InversionMethod;
  using plateau::symbols::Family;
  for (double tt : a.ts) {
    double value = 0.0;
    std::string label;
    if (a.method == "auto") {
      value = plateau::special::moment_phi_k(spec, a.k, tt);
      bool closed = spec.family() == Family::identity ||
                    spec.family() == Family::stable || tt <= 0.0;
      label = closed ? "closed_form" : "gaver_stehfest";
    } else if (a.method == "gaver_stehfest") {
      value = plateau::special::moment_phi_k(spec, a.k, tt,
                                             InversionMethod::gaver_stehfest);
      label = "gaver_stehfest";
    } else if (a.method == "talbot") {
      value = plateau::special::moment_phi_k(spec, a.k, tt,
                                             InversionMethod::talbot);
      label = "talbot";
    } else {
      throw plateau::DomainError(
          "unknown method '" + a.method +
          "'; expected auto, gaver_stehfest, or talbot");
    }
    t.rows.push_back({fd(tt), fd(value), label});
  }
  emit_table(t, a.out, false, 0, started);
}

// ---- series ------------------------------------------------------------

std::string kind_name(plateau::series::CoeffKind kind) {
  using plateau::series::CoeffKind;
  switch (kind) {
    case CoeffKind::classical_euler: return "classical_euler";
    case CoeffKind::frac_euler_alpha: return "frac_euler_alpha";
    case CoeffKind::geometric: return "geometric";
    case CoeffKind::custom: return "custom";
  }
  return "custom";
}

plateau::series::CoeffKind kind_from_name(const std::string& name) {
  using plateau::series::CoeffKind;
  if (name == "classical_euler") return CoeffKind::classical_euler;
  if (name == "frac_euler_alpha") return CoeffKind::frac_euler_alpha;
  if (name == "geometric") return CoeffKind::geometric;
  return CoeffKind::custom;
}

struct SeriesEulerArgs {
  double alpha = 0.5;
  double u0 = 0.5;
  int K = 20;
  bool literal_recursion = false;
  std::string out;
};

void run_series_euler(const SeriesEulerArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto coeffs = plateau::series::frac_euler_numbers(a.alpha, a.u0, a.K,
                                                    a.literal_recursion);
  plateau::csv::Table t;
  base_meta(t, "series euler");
  t.metadata.emplace_back("kind", kind_name(coeffs.kind));
  t.metadata.emplace_back("alpha", fd(a.alpha));
  t.metadata.emplace_back("u0", fd(a.u0));
  t.metadata.emplace_back("K", std::to_string(a.K));
  t.metadata.emplace_back("literal_recursion", a.literal_recursion ? "1" : "0");
  t.header = {"k", "E_k"};
  for (Eigen::Index k = 0; k < coeffs.e.size(); ++k)
    t.rows.push_back({std::to_string(k), fd(coeffs.e[k])});
  emit_table(t, a.out, false, 0, started);
}

plateau::series::SeriesCoefficients load_coeffs(const std::string& path) {
  auto tab = plateau::csv::read_file(path);
  plateau::series::SeriesCoefficients coeffs;
  coeffs.e = plateau::csv::column(tab, "E_k");
  if (coeffs.e.size() == 0)
    throw plateau::DomainError("coefficient file '" + path + "' is empty");
  if (const std::string* kind = meta_find(tab, "kind"))
    coeffs.kind = kind_from_name(*kind);
  else
    coeffs.kind = plateau::series::CoeffKind::custom;
  if (const std::string* alpha = meta_find(tab, "alpha"))
    coeffs.alpha = parse_config_value<double>("alpha", *alpha);
  else
    coeffs.alpha = 1.0;
  if (const std::string* u0 = meta_find(tab, "u0"))
    coeffs.u0 = parse_config_value<double>("u0", *u0);
  else
    coeffs.u0 = coeffs.e[0];
  return coeffs;
}

struct SeriesEvalArgs {
  std::string coeffs_path;
  FamilyArgs fam;
  double tmax = 1.0;
  long long steps = 200;
  std::string out;
};

void run_series_eval(const SeriesEvalArgs& a) {
  std::string started = tool::utc_now_iso8601();
  if (a.steps < 1) throw plateau::DomainError("steps must be at least 1");
  if (!(a.tmax > 0.0)) throw plateau::DomainError("tmax must be positive");
  auto coeffs = load_coeffs(a.coeffs_path);
  auto spec = make_spec(a.fam);
  plateau::csv::Table t;
  base_meta(t, "series eval");
  family_meta(t, a.fam);
  t.metadata.emplace_back("coeffs", a.coeffs_path);
  t.metadata.emplace_back("kind", kind_name(coeffs.kind));
  t.metadata.emplace_back("K", std::to_string(coeffs.order()));
  t.header = {"t", "u", "trunc_bound"};
  for (long long j = 0; j <= a.steps; ++j) {
    double tt = a.tmax * static_cast<double>(j) / static_cast<double>(a.steps);
    auto sv = plateau::series::eval_series(coeffs, spec, tt);
    t.rows.push_back({fd(tt), fd(sv.value), fd(sv.trunc_bound)});
  }
  emit_table(t, a.out, false, 0, started);
}

struct SeriesRadiusArgs {
  std::string coeffs_path;
  std::string out;
};

void run_series_radius(const SeriesRadiusArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto coeffs = load_coeffs(a.coeffs_path);
  auto est = plateau::series::estimate_radius(coeffs);
  plateau::csv::Table t;
  base_meta(t, "series radius");
  t.metadata.emplace_back("coeffs", a.coeffs_path);
  t.metadata.emplace_back("kind", kind_name(coeffs.kind));
  t.header = {"r", "method", "ratio_estimate", "root_estimate", "unstable"};
  t.rows.push_back({fd(est.r),
                    est.method == plateau::series::RadiusMethod::ratio
                        ? "ratio"
                        : "root",
                    fd(est.ratio_estimate), fd(est.root_estimate),
                    est.unstable ? "1" : "0"});
  emit_table(t, a.out, false, 0, started);
}

// ---- solve -------------------------------------------------------------

std::function<double(double)> load_sigma_interp(const std::string& path,
                                                double T) {
  auto tab = plateau::csv::read_file(path);
  Eigen::ArrayXd ts = plateau::csv::column(tab, "t");
  int col = header_index(tab, "sigma_hat");
  if (col < 0) col = header_index(tab, "sigma");
  if (col < 0)
    throw plateau::DomainError("sigma table '" + path +
                               "' needs a 'sigma' or 'sigma_hat' column");
  Eigen::ArrayXd ys = plateau::csv::column(tab, tab.header[col]);
  if (ts.size() < 2)
    throw plateau::DomainError("sigma table needs at least two rows");
  for (Eigen::Index i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1]))
      throw plateau::DomainError("sigma table times must increase");
  double slack = 1e-9 * std::max(1.0, T);
  if (ts[0] > slack || ts[ts.size() - 1] < T - slack)
    throw plateau::DomainError(
        "sigma table covers [" + fd(ts[0]) + ", " + fd(ts[ts.size() - 1]) +
        "] but the solve grid needs [0, " + fd(T) + "]");
  auto data = std::make_shared<std::pair<Eigen::ArrayXd, Eigen::ArrayXd>>(
      std::move(ts), std::move(ys));
  return [data](double x) {
    const Eigen::ArrayXd& t = data->first;
    const Eigen::ArrayXd& y = data->second;
    Eigen::Index n = t.size();
    if (x <= t[0]) return y[0];
    if (x >= t[n - 1]) return y[n - 1];
    Eigen::Index lo = 0;
    Eigen::Index hi = n - 1;
    while (hi - lo > 1) {
      Eigen::Index mid = (lo + hi) / 2;
      (t[mid] <= x ? lo : hi) = mid;
    }
    double w = (x - t[lo]) / (t[lo + 1] - t[lo]);
    return (1.0 - w) * y[lo] + w * y[lo + 1];
  };
}

struct SolveArgs {
  FamilyArgs fam;
  std::string rhs = "logistic";
  double u0 = 0.5;
  double decay = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  std::string sigma_path;
  std::string out;
};

void run_solve(const SolveArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  Eigen::Index steps = checked_steps(a.T, a.dt);
  double dt = a.T / static_cast<double>(steps);

  plateau::solver::NonlocalProblem prob{spec};
  prob.u0 = a.u0;
  prob.dt = dt;
  prob.steps = steps;
  if (a.rhs == "logistic") {
    prob.rhs = [](double u) { return u * (1.0 - u); };
    prob.rhs_lipschitz = 3.0;
  } else if (a.rhs == "linear") {
    double d = a.decay;
    prob.rhs = [d](double u) { return -d * u; };
    prob.rhs_lipschitz = std::abs(d);
  } else {
    throw plateau::DomainError("unknown rhs '" + a.rhs +
                               "'; expected logistic or linear");
  }
  if (!a.sigma_path.empty()) prob.sigma = load_sigma_interp(a.sigma_path, a.T);

  auto u = plateau::solver::solve_ivp(prob);

  plateau::csv::Table t;
  base_meta(t, "solve");
  family_meta(t, a.fam);
  t.metadata.emplace_back("rhs", a.rhs);
  if (a.rhs == "linear") t.metadata.emplace_back("decay", fd(a.decay));
  t.metadata.emplace_back("u0", fd(a.u0));
  t.metadata.emplace_back("T", fd(a.T));
  t.metadata.emplace_back("dt", fd(dt));
  t.metadata.emplace_back("steps", std::to_string(steps));
  if (!a.sigma_path.empty()) t.metadata.emplace_back("sigma", a.sigma_path);
  t.header = {"t", "u"};
  for (Eigen::Index j = 0; j <= steps; ++j)
    t.rows.push_back({fd(u.time(j)), fd(u.values[j])});
  emit_table(t, a.out, false, 0, started);
}

// ---- verify ------------------------------------------------------------

struct Lemma31Args {
  FamilyArgs fam;
  double decay = 1.0;
  double amp = 1.0;
  double T = 2.0;
  double dt0 = 0.0;
  int levels = 3;
  std::string out;
};

void run_verify_lemma31(const Lemma31Args& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  if (!(a.decay > 0.0)) throw plateau::DomainError("decay must be positive");
  if (a.levels < 2)
    throw plateau::DomainError("levels must be at least 2");
  double dt0 = a.dt0 > 0.0 ? a.dt0 : a.T / 100.0;
  auto report =
      plateau::solver::verify_convolved_rhs(spec, a.decay, a.amp, a.T, dt0,
                                            a.levels);
  bool pass = true;
  for (Eigen::Index i = 1; i < report.max_residual.size(); ++i)
    if (!(report.max_residual[i] < report.max_residual[i - 1])) pass = false;

  plateau::csv::Table t;
  base_meta(t, "verify lemma31");
  family_meta(t, a.fam);
  t.metadata.emplace_back("decay", fd(a.decay));
  t.metadata.emplace_back("amp", fd(a.amp));
  t.metadata.emplace_back("T", fd(a.T));
  t.metadata.emplace_back("status", pass ? "pass" : "fail");
  t.header = {"dt", "max_residual"};
  for (Eigen::Index i = 0; i < report.dts.size(); ++i)
    t.rows.push_back({fd(report.dts[i]), fd(report.max_residual[i])});
  emit_table(t, a.out, false, 0, started);
  if (!pass)
    throw plateau::NumericalToleranceError(
        "substitution residual did not decrease monotonically under dt "
        "halving");
}

struct Theorem41Args {
  double alpha = 0.5;
  double u0 = 0.5;
  double T = 1.0;
  double dt = 1e-2;
  double ds = 1e-3;
  long long n = 20000;
  int threads = default_threads();
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_verify_theorem41(const Theorem41Args& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = plateau::symbols::SymbolSpec::stable(a.alpha);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  Eigen::Index steps = checked_steps(a.T, a.dt);
  double dt = a.T / static_cast<double>(steps);
  auto rep = plateau::mc::theorem_closure(spec, a.u0, a.T, dt, a.n, seed,
                                          a.ds, a.threads);
  bool pass = rep.max_residual <= rep.threshold;

  plateau::csv::Table t;
  base_meta(t, "verify theorem41");
  t.metadata.emplace_back("family", "stable");
  t.metadata.emplace_back("alpha", fd(a.alpha));
  t.metadata.emplace_back("u0", fd(a.u0));
  t.metadata.emplace_back("T", fd(a.T));
  t.metadata.emplace_back("ds", fd(a.ds));
  t.metadata.emplace_back("seed", std::to_string(seed));
  t.metadata.emplace_back("window_begin",
                          std::to_string(rep.window_begin));
  t.header = {"n",         "dt",        "max_residual", "stat_bound",
              "dt_bound",  "threshold", "status"};
  t.rows.push_back({std::to_string(a.n), fd(dt), fd(rep.max_residual),
                    fd(rep.stat_bound), fd(rep.dt_bound), fd(rep.threshold),
                    pass ? "pass" : "fail"});
  emit_table(t, a.out, true, seed, started);
  if (!pass)
    throw plateau::NumericalToleranceError(
        "closure residual " + fd(rep.max_residual) +
        " exceeds the threshold " + fd(rep.threshold));
}

struct DelayedArgs {
  FamilyArgs fam;
  double v0 = 0.1;
  double T = 10.0;
  double ds = 1e-3;
  long long n = 20000;
  int threads = default_threads();
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_verify_delayed(const DelayedArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  plateau::mc::logistic_solution(a.v0, 0.0);
  auto v = [&a](double x) { return plateau::mc::logistic_solution(a.v0, x); };

  double limit = plateau::symbols::phi_over_lambda_limit(spec);
  Eigen::Index grid_steps = 10000;
  auto v_grid =
      plateau::grid::sample(v, a.T / static_cast<double>(grid_steps),
                            grid_steps);

  plateau::solver::DelayedRushedReport rep;
  bool ran_mc = false;
  if (std::isinf(limit)) {
    rep = plateau::solver::delayed_rushed_ratio(
        spec, v_grid, std::numeric_limits<double>::quiet_NaN(),
        std::numeric_limits<double>::quiet_NaN());
  } else {
    auto est = plateau::mc::estimate_occupation_integral(spec, v, a.T, a.n,
                                                         seed, a.ds,
                                                         a.threads);
    rep = plateau::solver::delayed_rushed_ratio(spec, v_grid, est.mean,
                                                est.std_error);
    ran_mc = true;
  }
  bool pass = !ran_mc || rep.within_3stderr;

  plateau::csv::Table t;
  base_meta(t, "verify delayed");
  family_meta(t, a.fam);
  t.metadata.emplace_back("v0", fd(a.v0));
  t.metadata.emplace_back("T", fd(a.T));
  t.metadata.emplace_back("n", std::to_string(a.n));
  t.metadata.emplace_back("seed", std::to_string(seed));
  t.header = {"limit",          "lhs", "lhs_stderr", "v_integral",
              "rhs",            "classification",    "status"};
  t.rows.push_back(
      {fd(rep.limit), fd(rep.lhs_mean), fd(rep.lhs_stderr),
       fd(rep.v_integral), fd(rep.rhs),
       plateau::solver::growth_class_name(rep.classification),
       pass ? "pass" : "fail"});
  emit_table(t, a.out, ran_mc, seed, started);
  if (!pass)
    throw plateau::NumericalToleranceError(
        "occupation integral " + fd(rep.lhs_mean) +
        " is not within three standard errors of " + fd(rep.rhs));
}

// ---- mc ----------------------------------------------------------------

void estimate_row(plateau::csv::Table& t, const plateau::mc::Estimate& est) {
  t.header = {"mean", "sample_variance", "stderr", "n", "seed"};
  t.rows.push_back({fd(est.mean), fd(est.variance), fd(est.std_error),
                    std::to_string(est.n), std::to_string(est.seed)});
}

struct McFunctionalArgs {
  FamilyArgs fam;
  VArgs v;
  double t = 1.0;
  double restrict_r = 0.0;
  double ds = 1e-3;
  long long n = 100000;
  int threads = default_threads();
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_mc_functional(const McFunctionalArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  auto v = make_v(a.v);
  plateau::mc::Estimate est =
      a.restrict_r > 0.0
          ? plateau::mc::estimate_restricted(spec, v, a.t, a.restrict_r, a.n,
                                             seed, a.ds, a.threads)
          : plateau::mc::estimate_functional(spec, v, a.t, a.n, seed, a.ds,
                                             a.threads);
  plateau::csv::Table t;
  base_meta(t, "mc functional");
  family_meta(t, a.fam);
  v_meta(t, a.v);
  t.metadata.emplace_back("t", fd(a.t));
  if (a.restrict_r > 0.0)
    t.metadata.emplace_back("restrict", fd(a.restrict_r));
  t.metadata.emplace_back("ds", fd(a.ds));
  estimate_row(t, est);
  emit_table(t, a.out, true, seed, started);
}

struct McSigmaArgs {
  FamilyArgs fam;
  VArgs v;
  double tmax = 1.0;
  long long steps = 100;
  double ds = 1e-3;
  long long n = 20000;
  int threads = default_threads();
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void run_mc_sigma(const McSigmaArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
  if (a.steps < 1) throw plateau::DomainError("steps must be at least 1");
  if (!(a.tmax > 0.0)) throw plateau::DomainError("tmax must be positive");
  auto v = make_v(a.v);
  Eigen::ArrayXd t_grid =
      Eigen::ArrayXd::LinSpaced(a.steps + 1, 0.0, a.tmax);
  auto tab = plateau::mc::estimate_variance_sigma(spec, v, t_grid, a.n, seed,
                                                  a.ds, a.threads);
  plateau::csv::Table t = plateau::csv::from_columns(
      {{"t", tab.t},
       {"u_hat", tab.u_hat},
       {"sigma_hat", tab.sigma_hat},
       {"stderr_u", tab.stderr_u},
       {"stderr_sigma", tab.stderr_sigma}});
  plateau::csv::Table meta;
  base_meta(meta, "mc sigma");
  family_meta(meta, a.fam);
  v_meta(meta, a.v);
  meta.metadata.emplace_back("n", std::to_string(a.n));
  meta.metadata.emplace_back("ds", fd(a.ds));
  meta.metadata.emplace_back("seed", std::to_string(seed));
  t.metadata = std::move(meta.metadata);
  emit_table(t, a.out, true, seed, started);
}

struct McConjectureArgs {
  FamilyArgs fam;
  double u0 = 0.5;
  int K = 10;
  double tmin = 0.001;
  double tmax = 0.3;
  int points = 60;
  double reg = 0.0;
  std::string out;
};

void run_mc_conjecture(const McConjectureArgs& a) {
  std::string started = tool::utc_now_iso8601();
  auto spec = make_spec(a.fam);
  if (a.K > 25)
    throw plateau::DomainError(
        "K must be at most 25; the moment ladder loses accuracy beyond "
        "that");
  if (a.points < 2) throw plateau::DomainError("points must be at least 2");
  if (!(a.tmin > 0.0) || !(a.tmax > a.tmin))
    throw plateau::DomainError("need 0 < tmin < tmax");
  Eigen::ArrayXd t_grid =
      Eigen::ArrayXd::LinSpaced(a.points, a.tmin, a.tmax);
  auto fit = plateau::mc::conjecture_search(spec, a.u0, a.K, t_grid, a.reg);

  plateau::csv::Table t;
  base_meta(t, "mc conjecture");
  family_meta(t, a.fam);
  t.metadata.emplace_back("u0", fd(a.u0));
  t.metadata.emplace_back("K", std::to_string(a.K));
  t.metadata.emplace_back("reg", fd(a.reg));
  t.metadata.emplace_back("iterations", std::to_string(fit.iterations));
  t.header = {"k", "E_hat"};
  for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k)
    t.rows.push_back({std::to_string(k), fd(fit.coefficients[k])});
  for (Eigen::Index i = 0; i < fit.t_grid.size(); ++i)
    t.trailing_comments.push_back("residual t=" + fd(fit.t_grid[i]) +
                                  " value=" + fd(fit.residuals[i]));
  emit_table(t, a.out, false, 0, started);
}

// ---- wiring ------------------------------------------------------------

void build_app(CLI::App& app) {
  app.require_subcommand(1);

  {
    auto* group = app.add_subcommand("symbols", "Bernstein symbol queries");
    group->require_subcommand(1);
    auto args = std::make_shared<SymbolsEvalArgs>();
    auto* cmd = group->add_subcommand(
        "eval", "evaluate phi(lambda) or the jump tail");
    add_config_flag(cmd);
    add_family(cmd, args->fam);
    cmd->add_option("--lambda", args->lambdas,
                    "symbol arguments (nonnegative)");
    cmd->add_option("--z", args->zs, "tail arguments (positive)");
    cmd->add_option("--out", args->out, "output CSV path (default stdout)");
    cmd->callback([args] { run_symbols_eval(*args); });
  }

  {
    auto args = std::make_shared<SimulateArgs>();
    auto* cmd = app.add_subcommand("simulate",
                                   "sample one subordinator path H");
    add_config_flag(cmd);
    add_family(cmd, args->fam);
    opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
    opt_cfg(cmd, "--smax", args->smax, "operational horizon", "smax");
    args->seed_opt = opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
    cmd->add_option("--out", args->out, "output CSV path")->required();
    cmd->callback([args] { run_simulate(*args); });
  }

  {
    auto args = std::make_shared<Figure1Args>();
    auto* cmd = app.add_subcommand(
        "figure1", "plateau panels: v(t), L_t, and v(L_t) on one path");
    add_config_flag(cmd);
    opt_cfg(cmd, "--v0", args->v0, "logistic initial value", "v0");
    opt_cfg(cmd, "--alpha", args->alpha, "stable index", "alpha");
    opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
    opt_cfg(cmd, "--smax", args->smax, "operational horizon", "smax");
    opt_cfg(cmd, "--steps", args->steps, "wall clock grid size", "steps");
    args->seed_opt = opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
    cmd->add_option("--out", args->out, "output CSV path")->required();
    cmd->callback([args] { run_figure1(*args); });
  }

  {
    auto* group = app.add_subcommand("special", "special function queries");
    group->require_subcommand(1);
    {
      auto args = std::make_shared<SpecialMlArgs>();
      auto* cmd = group->add_subcommand("ml", "Mittag-Leffler E_alpha(z)");
      add_config_flag(cmd);
      opt_cfg(cmd, "--alpha", args->alpha, "order in (0,1]", "alpha");
      cmd->add_option("--z", args->zs, "arguments")->required();
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_special_ml(*args); });
    }
    {
      auto args = std::make_shared<SpecialPhikArgs>();
      auto* cmd = group->add_subcommand(
          "phik", "moment function phi_k(t) = E[L_t^k]/k!");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      opt_cfg(cmd, "--k", args->k, "moment order", "k");
      cmd->add_option("--t", args->ts, "times")->required();
      cmd->add_option("--method", args->method,
                      "auto, gaver_stehfest, or talbot")
          ->capture_default_str();
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_special_phik(*args); });
    }
  }

  {
    auto* group = app.add_subcommand("series", "coefficient ladders");
    group->require_subcommand(1);
    {
      auto args = std::make_shared<SeriesEulerArgs>();
      auto* cmd = group->add_subcommand(
          "euler", "fractional Euler numbers of the logistic ladder");
      add_config_flag(cmd);
      opt_cfg(cmd, "--alpha", args->alpha, "generating order", "alpha");
      opt_cfg(cmd, "--u0", args->u0, "initial datum", "u0");
      opt_cfg(cmd, "--K", args->K, "highest coefficient", "K");
      cmd->add_flag("--literal-recursion", args->literal_recursion,
                    "reproduce the published recursion verbatim (drops the "
                    "i=0 term)");
      cmd->add_option("--out", args->out, "output CSV path")->required();
      cmd->callback([args] { run_series_euler(*args); });
    }
    {
      auto args = std::make_shared<SeriesEvalArgs>();
      auto* cmd = group->add_subcommand(
          "eval", "evaluate u(t) = sum_k E_k phi_k(t) from a coefficient "
                  "file");
      add_config_flag(cmd);
      cmd->add_option("--coeffs", args->coeffs_path, "coefficient CSV")
          ->required();
      add_family(cmd, args->fam);
      opt_cfg(cmd, "--tmax", args->tmax, "grid endpoint", "tmax");
      opt_cfg(cmd, "--steps", args->steps, "grid size", "steps");
      cmd->add_option("--out", args->out, "output CSV path")->required();
      cmd->callback([args] { run_series_eval(*args); });
    }
    {
      auto args = std::make_shared<SeriesRadiusArgs>();
      auto* cmd = group->add_subcommand(
          "radius", "convergence radius estimate for a coefficient file");
      add_config_flag(cmd);
      cmd->add_option("--coeffs", args->coeffs_path, "coefficient CSV")
          ->required();
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_series_radius(*args); });
    }
  }

  {
    auto args = std::make_shared<SolveArgs>();
    auto* cmd = app.add_subcommand(
        "solve", "march the non-local logistic equation");
    add_config_flag(cmd);
    add_family(cmd, args->fam, /*sigma_taken=*/true);
    opt_cfg(cmd, "--rhs", args->rhs, "logistic or linear", "rhs");
    opt_cfg(cmd, "--u0", args->u0, "initial value", "u0");
    opt_cfg(cmd, "--decay", args->decay, "rate for the linear rhs", "decay");
    opt_cfg(cmd, "--T", args->T, "final time", "T");
    opt_cfg(cmd, "--dt", args->dt, "time step", "dt");
    cmd->add_option("--sigma", args->sigma_path,
                    "CSV with a variance correction sigma(t) to subtract");
    cmd->add_option("--out", args->out, "output CSV path")->required();
    cmd->callback([args] { run_solve(*args); });
  }

  {
    auto* group = app.add_subcommand("verify", "consistency checks");
    group->require_subcommand(1);
    {
      auto args = std::make_shared<Lemma31Args>();
      auto* cmd = group->add_subcommand(
          "lemma31",
          "substitution identity residual for v(t) = amp exp(-decay t)");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      opt_cfg(cmd, "--decay", args->decay, "exponential rate", "decay");
      opt_cfg(cmd, "--amp", args->amp, "amplitude", "amp");
      opt_cfg(cmd, "--T", args->T, "final time", "T");
      opt_cfg(cmd, "--dt0", args->dt0, "coarsest step (default T/100)",
              "dt0");
      opt_cfg(cmd, "--levels", args->levels, "number of halvings", "levels");
      cmd->add_option("--out", args->out, "output CSV path")->required();
      cmd->callback([args] { run_verify_lemma31(*args); });
    }
    {
      auto args = std::make_shared<Theorem41Args>();
      auto* cmd = group->add_subcommand(
          "theorem41",
          "closure of the mean equation with the variance correction");
      add_config_flag(cmd);
      opt_cfg(cmd, "--alpha", args->alpha, "stable index", "alpha");
      opt_cfg(cmd, "--u0", args->u0, "initial value in (0,1)", "u0");
      opt_cfg(cmd, "--T", args->T, "final time", "T");
      opt_cfg(cmd, "--dt", args->dt, "wall clock step", "dt");
      opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
      opt_cfg(cmd, "--n", args->n, "number of paths", "n");
      opt_cfg(cmd, "--threads", args->threads, "worker threads", "threads");
      args->seed_opt =
          opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_verify_theorem41(*args); });
    }
    {
      auto args = std::make_shared<DelayedArgs>();
      auto* cmd = group->add_subcommand(
          "delayed",
          "time-average identity int u = lim phi/lambda * int v");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      opt_cfg(cmd, "--v0", args->v0, "logistic initial value", "v0");
      opt_cfg(cmd, "--T", args->T, "support endpoint for v", "T");
      opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
      opt_cfg(cmd, "--n", args->n, "number of paths", "n");
      opt_cfg(cmd, "--threads", args->threads, "worker threads", "threads");
      args->seed_opt =
          opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_verify_delayed(*args); });
    }
  }

  {
    auto* group = app.add_subcommand("mc", "Monte Carlo estimators");
    group->require_subcommand(1);
    {
      auto args = std::make_shared<McFunctionalArgs>();
      auto* cmd = group->add_subcommand(
          "functional", "estimate u(t) = E[v(L_t)] at one time");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      add_v(cmd, args->v);
      opt_cfg(cmd, "--t", args->t, "wall clock time", "t");
      opt_cfg(cmd, "--restrict", args->restrict_r,
              "restrict paths to L_t < r (0 disables)", "restrict");
      opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
      opt_cfg(cmd, "--n", args->n, "number of paths", "n");
      opt_cfg(cmd, "--threads", args->threads, "worker threads", "threads");
      args->seed_opt =
          opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
      cmd->add_option("--out", args->out, "output CSV path (default stdout)");
      cmd->callback([args] { run_mc_functional(*args); });
    }
    {
      auto args = std::make_shared<McSigmaArgs>();
      auto* cmd = group->add_subcommand(
          "sigma", "estimate u(t) and the variance correction on a grid");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      add_v(cmd, args->v);
      opt_cfg(cmd, "--tmax", args->tmax, "grid endpoint", "tmax");
      opt_cfg(cmd, "--steps", args->steps, "grid size", "steps");
      opt_cfg(cmd, "--ds", args->ds, "operational step", "ds");
      opt_cfg(cmd, "--n", args->n, "number of paths", "n");
      opt_cfg(cmd, "--threads", args->threads, "worker threads", "threads");
      args->seed_opt =
          opt_cfg(cmd, "--seed", args->seed, "master seed", "seed");
      cmd->add_option("--out", args->out, "output CSV path")->required();
      cmd->callback([args] { run_mc_sigma(*args); });
    }
    {
      auto args = std::make_shared<McConjectureArgs>();
      auto* cmd = group->add_subcommand(
          "conjecture",
          "fit ladder coefficients by collocation on the equation");
      add_config_flag(cmd);
      add_family(cmd, args->fam);
      opt_cfg(cmd, "--u0", args->u0, "initial value in (0,1)", "u0");
      opt_cfg(cmd, "--K", args->K, "highest coefficient (at most 25)", "K");
      opt_cfg(cmd, "--tmin", args->tmin, "first collocation time", "tmin");
      opt_cfg(cmd, "--tmax", args->tmax, "last collocation time", "tmax");
      opt_cfg(cmd, "--points", args->points, "collocation points", "points");
      opt_cfg(cmd, "--reg", args->reg, "ridge regularization", "reg");
      cmd->add_option("--out", args->out, "output CSV path")->required();
      cmd->callback([args] { run_mc_conjecture(*args); });
    }
  }
}

int run(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i > 0) g_command_line += ' ';
    g_command_line += argv[i];
  }
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      g_config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      g_config_path = arg.substr(9);
  }
  if (!g_config_path.empty())
    g_config = tool::ConfigFile::load(g_config_path);

  CLI::App app{"non-local logistic equations via inverse subordinators"};
  app.set_version_flag("--version", plateau::kVersion);
  build_app(app);
  g_config.validate_keys(g_accepted_keys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const plateau::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const plateau::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const plateau::NumericalToleranceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const plateau::HorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const plateau::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
