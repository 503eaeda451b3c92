#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "plateau/csv.hpp"
#include "plateau/mc.hpp"
#include "sha256.hpp"

namespace fs = std::filesystem;
using plateau::csv::Table;

namespace {

const std::string& work_dir() {
  static const std::string dir = [] {
    auto d = fs::temp_directory_path() /
             ("plateau_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d.string();
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out = work_dir() + "/stdout" + tag;
  const std::string err = work_dir() + "/stderr" + tag;
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += std::string(PLATEAU_BIN) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

Table parse_csv(const std::string& text) {
  std::istringstream is(text);
  return plateau::csv::read(is);
}

std::string meta(const Table& t, const std::string& key) {
  for (const auto& kv : t.metadata)
    if (kv.first == key) return kv.second;
  return "";
}

std::string path_in(const std::string& name) { return work_dir() + "/" + name; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("version flag and usage errors") {
  CHECK(run_cli("--version").code == 0);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("bogus").code == 2);
  CHECK(run_cli("symbols").code == 2);
  CHECK(run_cli("solve --family nosuch --rhs logistic --T 1 --dt 0.1 --out " +
                path_in("x.csv"))
            .code == 2);
}

TEST_CASE("symbol queries print one-row tables to stdout") {
  auto r = run_cli("symbols eval --family stable --alpha 0.5 --lambda 4");
  REQUIRE(r.code == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.header == std::vector<std::string>{"lambda", "phi", "phi_over_lambda"});
  REQUIRE(t.rows.size() == 1);
  CHECK(std::stod(t.rows[0][1]) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::stod(t.rows[0][2]) == doctest::Approx(0.5).epsilon(1e-12));

  auto zero = run_cli("symbols eval --family gamma --a 1 --b 2 --lambda 0");
  REQUIRE(zero.code == 0);
  const Table tz = parse_csv(zero.out);
  CHECK(std::stod(tz.rows[0][2]) == doctest::Approx(0.5).epsilon(1e-12));

  auto tail = run_cli("symbols eval --family gamma --a 1 --b 1 --z 1");
  REQUIRE(tail.code == 0);
  const Table tt = parse_csv(tail.out);
  CHECK(tt.header == std::vector<std::string>{"z", "tail"});
  CHECK(std::stod(tt.rows[0][1]) ==
        doctest::Approx(0.21938393439552029).epsilon(1e-9));
}

TEST_CASE("symbol queries demand exactly one abscissa") {
  CHECK(run_cli("symbols eval --family stable --alpha 0.5 --lambda 1 --z 1")
            .code == 2);
  CHECK(run_cli("symbols eval --family stable --alpha 0.5").code == 2);
}

TEST_CASE("special function queries report value and method") {
  auto r = run_cli("special ml --alpha 0.5 --z -1");
  REQUIRE(r.code == 0);
  Table t = parse_csv(r.out);
  CHECK(t.header == std::vector<std::string>{"input", "value", "method"});
  CHECK(std::stod(t.rows[0][1]) ==
        doctest::Approx(0.427583576155807).epsilon(1e-9));
  CHECK(t.rows[0][2] == "series");

  CHECK(parse_csv(run_cli("special ml --alpha 0.5 --z -3").out).rows[0][2] ==
        "integral");
  CHECK(parse_csv(run_cli("special ml --alpha 1 --z -1").out).rows[0][2] ==
        "exp");

  auto ladder =
      run_cli("special phik --family stable --alpha 0.5 --k 2 --t 1");
  REQUIRE(ladder.code == 0);
  Table tl = parse_csv(ladder.out);
  CHECK(std::stod(tl.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tl.rows[0][2] == "closed_form");

  auto talbot = run_cli(
      "special phik --family stable --alpha 0.5 --k 2 --t 1 --method talbot");
  REQUIRE(talbot.code == 0);
  Table tb = parse_csv(talbot.out);
  CHECK(std::stod(tb.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(tb.rows[0][2] == "talbot");

  auto gamma = run_cli("special phik --family gamma --a 1 --b 1 --k 2 --t 1.5");
  REQUIRE(gamma.code == 0);
  CHECK(parse_csv(gamma.out).rows[0][2] == "gaver_stehfest");
}

TEST_CASE("multi-column outputs demand a file path") {
  CHECK(run_cli("simulate --family stable --alpha 0.5 --ds 0.01 --smax 1")
            .code == 2);
  CHECK(run_cli("mc sigma --family stable --alpha 0.5 --n 100 --steps 5")
            .code == 2);
}

TEST_CASE("simulate writes the skeleton and a checksummed manifest") {
  const std::string out = path_in("walk.csv");
  auto r = run_cli(
      "simulate --family stable --alpha 0.5 --ds 1e-3 --smax 1 --seed 7 "
      "--out " +
      out);
  REQUIRE(r.code == 0);
  const Table t = plateau::csv::read_file(out);
  CHECK(t.header == std::vector<std::string>{"s", "H"});
  CHECK(t.rows.size() == 1001);
  CHECK(meta(t, "seed") == "7");
  CHECK(meta(t, "ds") == "0.001");

  const std::string manifest_path = out + ".manifest.json";
  REQUIRE(fs::exists(manifest_path));
  const auto doc = nlohmann::json::parse(slurp(manifest_path));
  CHECK(doc["command"].get<std::string>().find("simulate") !=
        std::string::npos);
  CHECK(doc["seed"].get<std::uint64_t>() == 7);
  REQUIRE(doc["outputs"].size() == 1);
  CHECK(doc["outputs"][0]["path"].get<std::string>() == out);
  CHECK(doc["outputs"][0]["sha256"].get<std::string>() ==
        tool::sha256_file_hex(out));
}

TEST_CASE("repeated seeds give byte-identical trajectory files") {
  const std::string a = path_in("fig_a.csv");
  const std::string b = path_in("fig_b.csv");
  REQUIRE(run_cli("figure1 --v0 0.1 --alpha 0.5 --seed 7 --out " + a).code == 0);
  REQUIRE(run_cli("figure1 --v0 0.1 --alpha 0.5 --seed 7 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  const std::string av = path_in("fig_a_v.csv");
  const std::string bv = path_in("fig_b_v.csv");
  REQUIRE(fs::exists(av));
  REQUIRE(fs::exists(bv));
  CHECK(slurp(av) == slurp(bv));
  CHECK(!slurp(a).empty());

  const Table t = plateau::csv::read_file(a);
  CHECK(t.header == std::vector<std::string>{"t", "L", "v_of_L"});
  const Table tv = plateau::csv::read_file(av);
  CHECK(tv.header == std::vector<std::string>{"s", "v"});
  CHECK(std::stod(meta(t, "horizon")) > 10.0);

  const auto doc = nlohmann::json::parse(slurp(a + ".manifest.json"));
  CHECK(doc["outputs"].size() == 2);
}

TEST_CASE("config values load, flags override, and the environment sits between") {
  const std::string cfg = path_in("run.cfg");
  write_text(cfg, "seed=123\nds=0.01\n");
  const std::string out = path_in("cfgwalk.csv");
  auto base = run_cli("simulate --family stable --alpha 0.5 --smax 1 "
                      "--config " +
                      cfg + " --out " + out);
  REQUIRE(base.code == 0);
  CHECK(meta(plateau::csv::read_file(out), "seed") == "123");
  CHECK(meta(plateau::csv::read_file(out), "ds") == "0.01");

  auto flag = run_cli("simulate --family stable --alpha 0.5 --smax 1 --seed 9 "
                      "--config " +
                      cfg + " --out " + out);
  REQUIRE(flag.code == 0);
  CHECK(meta(plateau::csv::read_file(out), "seed") == "9");

  auto env = run_cli("simulate --family stable --alpha 0.5 --smax 1 "
                     "--config " +
                         cfg + " --out " + out,
                     "PLATEAU_SEED=77");
  REQUIRE(env.code == 0);
  CHECK(meta(plateau::csv::read_file(out), "seed") == "77");

  auto both = run_cli("simulate --family stable --alpha 0.5 --smax 1 --seed 9 "
                      "--config " +
                          cfg + " --out " + out,
                      "PLATEAU_SEED=77");
  REQUIRE(both.code == 0);
  CHECK(meta(plateau::csv::read_file(out), "seed") == "9");
}

TEST_CASE("config rejects unknown keys and unparsable values") {
  const std::string cfg = path_in("bad.cfg");
  write_text(cfg, "bogus=3\n");
  auto r = run_cli("simulate --family stable --alpha 0.5 --smax 1 --config " +
                   cfg + " --out " + path_in("ignored.csv"));
  CHECK(r.code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.err.find("accepted") != std::string::npos);

  const std::string cfg2 = path_in("bad2.cfg");
  write_text(cfg2, "seed=abc\n");
  auto r2 = run_cli("simulate --family stable --alpha 0.5 --smax 1 --config " +
                    cfg2 + " --out " + path_in("ignored.csv"));
  CHECK(r2.code == 2);
  CHECK(r2.err.find("invalid value") != std::string::npos);
}

TEST_CASE("series commands chain through coefficient files") {
  const std::string coeffs = path_in("coeffs.csv");
  auto gen = run_cli("series euler --alpha 0.5 --u0 0.5 --K 20 --out " + coeffs);
  REQUIRE(gen.code == 0);
  const Table tc = plateau::csv::read_file(coeffs);
  CHECK(tc.header == std::vector<std::string>{"k", "E_k"});
  CHECK(tc.rows.size() == 21);
  CHECK(std::stod(tc.rows[0][1]) == 0.5);
  CHECK(std::stod(tc.rows[1][1]) == 0.25);

  const std::string u = path_in("series_u.csv");
  auto eval = run_cli("series eval --coeffs " + coeffs +
                      " --family stable --alpha 0.5 --tmax 1 --steps 200 "
                      "--out " +
                      u);
  REQUIRE(eval.code == 0);
  const Table tu = plateau::csv::read_file(u);
  CHECK(tu.header == std::vector<std::string>{"t", "u", "trunc_bound"});
  CHECK(tu.rows.size() == 201);
  CHECK(std::stod(tu.rows[0][1]) == doctest::Approx(0.5).epsilon(1e-12));

  auto radius = run_cli("series radius --coeffs " + coeffs);
  REQUIRE(radius.code == 0);
  const Table tr = parse_csv(radius.out);
  CHECK(tr.header[0] == "r");
  REQUIRE(tr.rows.size() == 1);
}

TEST_CASE("solve reproduces the logistic flow and validates its correction table") {
  const std::string out = path_in("solve_u.csv");
  auto r = run_cli(
      "solve --family identity --rhs logistic --u0 0.1 --T 1 --dt 1e-3 --out " +
      out);
  REQUIRE(r.code == 0);
  const Table t = plateau::csv::read_file(out);
  CHECK(t.header == std::vector<std::string>{"t", "u"});
  REQUIRE(t.rows.size() == 1001);
  const double last = std::stod(t.rows[1000][1]);
  CHECK(last ==
        doctest::Approx(plateau::mc::logistic_solution(0.1, 1.0)).epsilon(1e-5));

  const std::string sigma = path_in("sigma_short.csv");
  write_text(sigma, "t,sigma\n0,0\n0.5,0\n");
  auto bad = run_cli("solve --family identity --rhs logistic --u0 0.1 --T 1 "
                     "--dt 1e-3 --sigma " +
                     sigma + " --out " + out);
  CHECK(bad.code == 2);

  const std::string sigma_full = path_in("sigma_full.csv");
  write_text(sigma_full, "t,sigma\n0,0\n1,0\n");
  auto ok = run_cli("solve --family identity --rhs logistic --u0 0.1 --T 1 "
                    "--dt 1e-3 --sigma " +
                    sigma_full + " --out " + out);
  CHECK(ok.code == 0);
}

TEST_CASE("residual verification passes and records the ladder of steps") {
  const std::string out = path_in("resid.csv");
  auto r = run_cli(
      "verify lemma31 --family gamma --a 1 --b 1 --decay 1 --T 2 --out " + out);
  REQUIRE(r.code == 0);
  const Table t = plateau::csv::read_file(out);
  CHECK(t.header == std::vector<std::string>{"dt", "max_residual"});
  REQUIRE(t.rows.size() >= 3);
  CHECK(meta(t, "status") == "pass");
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    CHECK(std::stod(t.rows[i][1]) < std::stod(t.rows[i - 1][1]));
}

TEST_CASE("closure verification prints its verdict row") {
  auto r = run_cli(
      "verify theorem41 --alpha 0.5 --u0 0.5 --T 1 --dt 0.02 --n 3000 "
      "--threads 2");
  REQUIRE(r.code == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.header ==
        std::vector<std::string>{"n", "dt", "max_residual", "stat_bound",
                                 "dt_bound", "threshold", "status"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][6] == "pass");
  CHECK(std::stod(t.rows[0][2]) <= std::stod(t.rows[0][5]));
}

TEST_CASE("monte carlo point estimates echo their run parameters") {
  auto r = run_cli(
      "mc functional --family stable --alpha 0.5 --v logistic --v0 0.5 --t 1 "
      "--n 5000 --seed 42 --threads 2");
  REQUIRE(r.code == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.header == std::vector<std::string>{"mean", "sample_variance",
                                             "stderr", "n", "seed"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][3] == "5000");
  CHECK(t.rows[0][4] == "42");
  const double mean = std::stod(t.rows[0][0]);
  CHECK(mean > 0.5);
  CHECK(mean < 1.0);

  auto env = run_cli(
      "mc functional --family stable --alpha 0.5 --v logistic --v0 0.5 --t 0.5 "
      "--n 100 --threads 1",
      "PLATEAU_SEED=5");
  REQUIRE(env.code == 0);
  CHECK(parse_csv(env.out).rows[0][4] == "5");
}

TEST_CASE("variance correction tables carry all five columns") {
  const std::string out = path_in("sigma_table.csv");
  auto r = run_cli(
      "mc sigma --family stable --alpha 0.5 --v logistic --v0 0.5 --tmax 1 "
      "--steps 10 --n 1000 --seed 3 --threads 2 --out " +
      out);
  REQUIRE(r.code == 0);
  const Table t = plateau::csv::read_file(out);
  CHECK(t.header == std::vector<std::string>{"t", "u_hat", "sigma_hat",
                                             "stderr_u", "stderr_sigma"});
  REQUIRE(t.rows.size() == 11);
  CHECK(std::stod(t.rows[0][1]) == 0.5);
  CHECK(std::stod(t.rows[0][2]) == 0.0);
}

TEST_CASE("coefficient fits write the ladder plus residual comments") {
  const std::string out = path_in("conj.csv");
  auto r = run_cli("mc conjecture --family gamma --a 1 --b 1 --K 10 --out " +
                   out);
  REQUIRE(r.code == 0);
  const Table t = plateau::csv::read_file(out);
  CHECK(t.header == std::vector<std::string>{"k", "E_hat"});
  REQUIRE(t.rows.size() == 11);
  CHECK(std::stod(t.rows[0][1]) == 0.5);
  CHECK(std::stod(t.rows[1][1]) == 0.25);
  REQUIRE(!t.trailing_comments.empty());
  CHECK(t.trailing_comments[0].find("residual") == 0);

  CHECK(run_cli("mc conjecture --family gamma --a 1 --b 1 --K 26 --out " + out)
            .code == 2);
}

TEST_CASE("error taxonomy maps onto process exit codes") {
  // Unreachable acceptance rate in the tempered sampler: capability, 4.
  auto cap = run_cli(
      "mc functional --family tempered_stable --alpha 0.5 --gamma 1e6 "
      "--v logistic --v0 0.5 --t 0.5 --n 100 --ds 0.01 --threads 1");
  CHECK(cap.code == 4);

  // Collocation on a degenerate window: tolerance, 3.
  auto tol = run_cli(
      "mc conjecture --family stable --alpha 0.5 --K 24 --tmin 0.799999 "
      "--tmax 0.8 --points 60 --out " +
      path_in("rankdef.csv"));
  CHECK(tol.code == 3);

  // Negative time: domain, 2.
  auto dom = run_cli(
      "mc functional --family stable --alpha 0.5 --v logistic --v0 0.5 "
      "--t -1 --n 100 --threads 1");
  CHECK(dom.code == 2);
}
