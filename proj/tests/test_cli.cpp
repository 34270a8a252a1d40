// End-to-end tests of the command-line binary (path injected as SKS_BIN).
// Each test drives the real executable through a shell, captures combined
// stdout/stderr, and checks the exit code and the files left behind.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SKS_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), int(buf.size()), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

struct TempDir {
  fs::path p;
  TempDir() {
    p = fs::temp_directory_path() / ("sks-cli-test-" + std::to_string(std::rand()));
    fs::create_directories(p);
  }
  ~TempDir() { fs::remove_all(p); }
  std::string file(const std::string& name) const { return (p / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drop the single timestamp line so manifests can be compared byte-wise.
std::string without_timestamp(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("timestamp: ", 0) != 0) out += line + "\n";
  return out;
}

const char* kTinyConfig = R"([grid]
nx = 16
ny = 16

[model]
chi = 1.0
u0 = cosine:1:0.3:1:1

[source]
kind = logistic
mu = 1.0

[noise]
family = linear
kappas = 0.09, 0.04, 0.02

[integrator]
dt = 0.001
T = 0.01
nonneg = off
p_norms = 2, 3
)";

}  // namespace

TEST_CASE("no arguments is a usage error") {
  const CliResult r = run_cli("");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flags and subcommands are usage errors") {
  CHECK(run_cli("simulate --no-such-flag").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
  const CliResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("simulate") != std::string::npos);
  CHECK(r.output.find("verify") != std::string::npos);
}

TEST_CASE("missing and malformed configs are usage errors with line numbers") {
  TempDir tmp;
  CHECK(run_cli("simulate " + tmp.file("absent.cfg")).exit_code == 2);

  write_text(tmp.file("bad.cfg"), "[grid]\nnx = banana\n");
  const CliResult r = run_cli("simulate " + tmp.file("bad.cfg"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 2") != std::string::npos);
}

TEST_CASE("hypothesis gate failures exit with the validator code") {
  TempDir tmp;
  // mu_tilde >= mu cannot be dominated.
  write_text(tmp.file("gate.cfg"), std::string(kTinyConfig) + "\n[source2]\n");
  // First make sure an unknown section is a config error, not a gate error.
  CHECK(run_cli("simulate " + tmp.file("gate.cfg")).exit_code == 2);

  std::string gate = kTinyConfig;
  const std::string needle = "mu = 1.0";
  gate.replace(gate.find(needle), needle.size(), "mu = 1.0\nmu_tilde = 1.5");
  write_text(tmp.file("gate2.cfg"), gate);
  const CliResult r = run_cli("simulate " + tmp.file("gate2.cfg"));
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("model validation failed") != std::string::npos);
}

TEST_CASE("simulate writes the full output set and reports the outcome") {
  TempDir tmp;
  write_text(tmp.file("run.cfg"), kTinyConfig);
  const std::string out = tmp.file("out");
  const CliResult r =
      run_cli("simulate " + tmp.file("run.cfg") + " --out " + out + " --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("completed") != std::string::npos);
  CHECK(fs::exists(out + "/series.csv"));
  CHECK(fs::exists(out + "/manifest.txt"));
  const std::string series = read_text(out + "/series.csv");
  CHECK(series.rfind("t,sup_norm,mass,min_value,lp_2,lp_3\n", 0) == 0);
  // 10 steps + header.
  CHECK(std::count(series.begin(), series.end(), '\n') == 12);
  const std::string manifest = read_text(out + "/manifest.txt");
  CHECK(manifest.find("seed: 7") != std::string::npos);
  CHECK(manifest.find("command: simulate") != std::string::npos);
  CHECK(manifest.find(kTinyConfig) != std::string::npos);
}

TEST_CASE("simulate honors the dt override and snapshot requests") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "store_fields = true\nsnapshot_times = 0.002\n";
  // Shorten the horizon in the file; the step size comes from the flag.
  const std::string needle = "T = 0.01";
  const std::size_t at = cfg.find(needle);
  REQUIRE(at != std::string::npos);
  cfg.replace(at, needle.size(), "T = 0.004");
  write_text(tmp.file("run.cfg"), cfg);
  const std::string out = tmp.file("out");
  const CliResult r =
      run_cli("simulate " + tmp.file("run.cfg") + " --out " + out + " --dt 0.0005");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out + "/snapshot_000.ksf1"));
  CHECK(fs::exists(out + "/final.ksf1"));
  const std::string series = read_text(out + "/series.csv");
  // 8 steps of 5e-4 + header.
  CHECK(std::count(series.begin(), series.end(), '\n') == 10);
}

TEST_CASE("ensemble runs are bit-reproducible apart from the timestamp") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "checkpoint_times = 0.005, 0.01\n";
  write_text(tmp.file("ens.cfg"), cfg);
  const std::string a = tmp.file("a"), b = tmp.file("b");
  const std::string common =
      "ensemble " + tmp.file("ens.cfg") + " --paths 2 --seed 7 ";
  CHECK(run_cli(common + "--out " + a).exit_code == 0);
  CHECK(run_cli(common + "--out " + b).exit_code == 0);
  CHECK(read_text(a + "/stats.csv") == read_text(b + "/stats.csv"));
  CHECK(read_text(a + "/stats.csv").find("completed") != std::string::npos);
  CHECK(without_timestamp(read_text(a + "/manifest.txt")) ==
        without_timestamp(read_text(b + "/manifest.txt")));
}

TEST_CASE("ensemble estimator requests land in estimators.json") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "\n[ensemble]\npaths = 3\nseed = 11\nmoment_p0 = 3\ngamma = 0.2\n";
  write_text(tmp.file("est.cfg"), cfg);
  const std::string out = tmp.file("out");
  const CliResult r = run_cli("ensemble " + tmp.file("est.cfg") + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/estimators.json"));
  const std::string est = read_text(out + "/estimators.json");
  CHECK(est.find("\"moment\"") != std::string::npos);
  CHECK(est.find("\"gamma_moment\"") != std::string::npos);
}

TEST_CASE("picard subcommand writes the iteration report") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "\n[picard]\nhorizon = 0.005\ndt = 0.001\nm = 3.0\n";
  write_text(tmp.file("pic.cfg"), cfg);
  const std::string out = tmp.file("out");
  const CliResult r = run_cli("picard " + tmp.file("pic.cfg") + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/picard.csv"));
  const std::string csv = read_text(out + "/picard.csv");
  CHECK(csv.rfind("iter,diff_sup,ratio\n", 0) == 0);
  CHECK(r.output.find("converged") != std::string::npos);
}

TEST_CASE("picard sweep over horizons and cutoffs emits the long table") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "\n[picard]\ndt = 0.001\nhorizons = 0.004, 0.008\nms = 2.0, 3.0\n";
  write_text(tmp.file("pic.cfg"), cfg);
  const std::string out = tmp.file("out");
  const CliResult r = run_cli("picard " + tmp.file("pic.cfg") + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/picard_sweep.csv"));
  const std::string csv = read_text(out + "/picard_sweep.csv");
  CHECK(csv.rfind("iter,diff_sup,ratio,T,m\n", 0) == 0);
}

TEST_CASE("ito-check writes per-norm ledgers and a summary verdict") {
  TempDir tmp;
  write_text(tmp.file("ito.cfg"), kTinyConfig);
  const std::string out = tmp.file("out");
  const CliResult r = run_cli("ito-check " + tmp.file("ito.cfg") + " --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out + "/ledger_p2.csv"));
  CHECK(fs::exists(out + "/ledger_p3.csv"));
  REQUIRE(fs::exists(out + "/ito_summary.json"));
  const std::string summary = read_text(out + "/ito_summary.json");
  CHECK(summary.find("\"status\": \"completed\"") != std::string::npos);
  CHECK(summary.find("\"pass\": true") != std::string::npos);
  CHECK(summary.find("\"pass\": false") == std::string::npos);
  CHECK(summary.find("mass_balance") != std::string::npos);
  CHECK(summary.find("cancellation") != std::string::npos);
}

TEST_CASE("certify-operators writes the ratio table") {
  TempDir tmp;
  std::string cfg = kTinyConfig;
  cfg += "\n[certify]\ntrials = 3\n";
  write_text(tmp.file("cert.cfg"), cfg);
  const std::string out = tmp.file("out");
  const CliResult r =
      run_cli("certify-operators " + tmp.file("cert.cfg") + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/cert.csv"));
  const std::string csv = read_text(out + "/cert.csv");
  CHECK(csv.rfind("estimate_id,p,beta,t,max_ratio,trials\n", 0) == 0);
  CHECK(csv.find("A1,") != std::string::npos);
  CHECK(csv.find("A5,") != std::string::npos);
}

TEST_CASE("verify runs a single criterion and records the result") {
  TempDir tmp;
  const std::string out = tmp.file("out");
  const CliResult r = run_cli("verify --criterion 11 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("criterion 11") != std::string::npos);
  CHECK(r.output.find("PASS") != std::string::npos);
  REQUIRE(fs::exists(out + "/acceptance.json"));
  const std::string json = read_text(out + "/acceptance.json");
  CHECK(json.find("\"id\": 11") != std::string::npos);
  CHECK(json.find("\"passed\": 1") != std::string::npos);
}

TEST_CASE("verify rejects an unknown criterion id") {
  CHECK(run_cli("verify --criterion 99").exit_code == 2);
}
