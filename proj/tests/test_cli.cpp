// Golden-file tests for every CLI path. Each case runs the built binary with
// MIDLAYER_FIXED_TIME=1 (zeroes wall-clock fields) and compares stdout bytes
// against a checked-in golden file. Regenerate with tools/regen_goldens.sh.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_bin() {
  const char* p = std::getenv("MIDLAYER_CLI_BIN");
  REQUIRE_MESSAGE(p != nullptr, "MIDLAYER_CLI_BIN must point at the midlayer binary");
  return p;
}

std::string golden_dir() {
  const char* p = std::getenv("MIDLAYER_GOLDEN_DIR");
  REQUIRE_MESSAGE(p != nullptr, "MIDLAYER_GOLDEN_DIR must point at tests/golden");
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), ("missing golden file: " + path).c_str());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void check_golden(const std::string& name, const std::string& args, int want_exit) {
  RunResult r = run_cli(args);
  CHECK_MESSAGE(r.exit_code == want_exit, (name + ": exit code " + std::to_string(r.exit_code)));
  std::string want = read_file(golden_dir() + "/" + name + ".golden");
  CHECK_MESSAGE(r.out == want, (name + ": output drifted from golden file"));
}

}  // namespace

TEST_CASE("count") {
  check_golden("count_d2", "count --d 2 --lambda 1 --coefficients --identity", 0);
  check_golden("count_d3_rational", "count --d 3 --lambda 1/2 --restricted m_side", 0);
  check_golden("count_naive", "count --d 2 --lambda 2 --method naive", 0);
}

TEST_CASE("graph") {
  check_golden("graph_4_2", "graph --n 4 --k 2", 0);
  check_golden("graph_iso", "graph --n 5 --k 3 --iso iii --iso-max-size 5", 0);
  check_golden("graph_two_linked", "graph --n 5 --k 3 --two-linked-vertex {1,2,3} --two-linked-size 2", 0);
}

TEST_CASE("expand") {
  check_golden("expand_d3_csv", "expand --d 3 --lambda 1 --k-max 2 --source closed-form --format csv", 0);
  check_golden("expand_d2_enumerated", "expand --d 2 --lambda 1 --k-max 4 --source enumerated", 0);
}

TEST_CASE("kp-check") {
  check_golden("kp_d2", "kp-check --d 2 --lambda 1 --cap 1", 0);
}

TEST_CASE("container") {
  check_golden("container_d3", "container --d 3 --a 1 --b 3 --lambda 1 --c1 1", 0);
  check_golden("container_d3_csv", "container --d 3 --a 2 --b 5 --format csv", 0);
}

TEST_CASE("sample with records file") {
  std::string records = "/tmp/midlayer_cli_test_records.jsonl";
  std::remove(records.c_str());
  check_golden("sample_d2", "sample --d 2 --lambda 1 --count 3 --seed 42 --records " + records, 0);
  std::string got = read_file(records);
  std::string want = read_file(golden_dir() + "/sample_d2_records.golden");
  CHECK(got == want);
}

TEST_CASE("census") {
  check_golden("census_d2", "census --d 2 --lambda 1 --mode exact", 0);
  check_golden("census_d2_sampled", "census --d 2 --lambda 1 --mode sampled --samples 500 --seed 7", 0);
}

TEST_CASE("estimate") {
  check_golden("estimate_d3", "estimate --d 3 --lambda 1 --k 2 --source closed-form", 0);
}

TEST_CASE("verify fast suite") {
  check_golden("verify_fast_csv", "verify --suite fast --format csv", 0);
}

TEST_CASE("error paths carry stable exit codes and payloads") {
  check_golden("error_parse", "count --d 2 --lambda -1", 2);
  check_golden("error_scale", "count --d 5", 3);
  check_golden("error_shape", "graph --n 4 --k 2 --iso i", 4);
}

TEST_CASE("a corrupted ursell cache is an explicit error, not a silent recompute") {
  std::string dir = "/tmp/midlayer_cli_corrupt_cache";
  std::system(("mkdir -p " + dir).c_str());
  {
    std::ofstream f(dir + "/ursell.cache", std::ios::trunc);
    f << "garbage\n";
  }
  std::string cmd = "MIDLAYER_CACHE_DIR=" + dir + " " + cli_bin() +
                    " expand --d 2 --lambda 1 --k-max 2 --source enumerated 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(out.find("\"code\": \"cache\"") != std::string::npos);
}

TEST_CASE("a healthy cache directory is persisted and reused") {
  std::string dir = "/tmp/midlayer_cli_good_cache";
  std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  std::string base = "MIDLAYER_CACHE_DIR=" + dir + " " + cli_bin() +
                     " expand --d 2 --lambda 1 --k-max 2 --source enumerated";
  CHECK(std::system((base + " > /dev/null 2>&1").c_str()) == 0);
  std::ifstream f(dir + "/ursell.cache");
  CHECK(f.good());
  CHECK(std::system((base + " > /dev/null 2>&1").c_str()) == 0);  // reload path
}

TEST_CASE("config file supplies defaults") {
  std::string cfg = "/tmp/midlayer_cli_test.cfg";
  {
    std::ofstream f(cfg, std::ios::trunc);
    f << "[count]\nd=2\nlambda=1\n";
  }
  RunResult direct = run_cli("count --d 2 --lambda 1");
  RunResult via_cfg = run_cli("--config " + cfg + " count");
  CHECK(via_cfg.exit_code == 0);
  CHECK(via_cfg.out == direct.out);
}

TEST_CASE("reports are byte-identical across runs") {
  RunResult a = run_cli("census --d 2 --lambda 1 --mode exact");
  RunResult b = run_cli("census --d 2 --lambda 1 --mode exact");
  CHECK(a.out == b.out);
}
