#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr combined

  bool contains(const std::string& needle) const {
    return output.find(needle) != std::string::npos;
  }
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / "fermicert_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path fresh_dir(const std::string& name) {
  auto d = scratch_dir() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunResult run(const std::string& args) {
  static int counter = 0;
  auto capture = scratch_dir() / ("capture_" + std::to_string(counter++) + ".txt");
  std::string cmd = std::string(FERMICERT_CLI_PATH) + " " + args + " > " +
                    capture.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string data_file(const std::string& name) {
  return std::string(FERMICERT_DATA_DIR) + "/" + name;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("--version prints the tool version") {
  RunResult r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.output == "fermicert 0.1.0\n");
}

TEST_CASE("no subcommand prints help and fails") {
  RunResult r = run("");
  CHECK(r.code == 2);
  CHECK(r.contains("generate"));
  CHECK(r.contains("certify"));
}

TEST_CASE("bad flag values are rejected by the parser") {
  CHECK(run("generate --format xml").code == 2);
  CHECK(run("generate --no-such-flag").code == 2);
}

TEST_CASE("generate writes both dialects and a summary") {
  auto dir = fresh_dir("generate");
  RunResult r = run("generate --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.contains("14 polynomials from 29 z-monomial coefficients"));
  CHECK(r.contains("degree multiset: {1,2,2,3,4,4,5,6,7,7,9,10,12,15}"));
  CHECK(r.contains("Bezout bound: 4572288000"));

  json summary = read_json(dir / "generate_summary.json");
  CHECK(summary.at("version") == "fermicert 0.1.0");
  CHECK(summary.at("config").at("q1") == 3);
  CHECK(summary.at("config").at("q2") == 5);
  CHECK(summary.at("polynomials") == 14);
  CHECK(summary.at("z_monomials") == 29);
  CHECK(summary.at("bezout_bound") == "4572288000");

  // both exports start with the version header and are non-trivial
  for (const char* name : {"system_a.txt", "system_b.txt"}) {
    std::ifstream in(dir / name);
    REQUIRE(in.good());
    std::string first;
    std::getline(in, first);
    CHECK(first == "# fermicert 0.1.0");
  }
}

TEST_CASE("generate records a slice in the summary") {
  auto dir = fresh_dir("generate_slice");
  RunResult r = run("generate --slice v11=61/17 --format json --out " + dir.string());
  CHECK(r.code == 0);
  json summary = json::parse(r.output);
  CHECK(summary.at("slice_var") == 0);
  CHECK(summary.at("slice_value") == "61/17");
  CHECK(summary.at("bezout_bound") == "4572288000");
}

TEST_CASE("generate refuses non-coprime periods unless overridden") {
  auto dir = fresh_dir("generate_coprime");
  RunResult bad = run("generate --q1 3 --q2 3 --out " + dir.string());
  CHECK(bad.code == 2);
  CHECK(bad.contains("error: periods must be coprime (use --allow-non-coprime)"));

  RunResult ok = run("generate --q1 3 --q2 3 --allow-non-coprime --out " + dir.string());
  CHECK(ok.code == 0);
}

TEST_CASE("certify accepts the reference potential") {
  auto dir = fresh_dir("certify_good");
  RunResult r = run("certify " + data_file("vstar.json") +
                    " --slice v11=61/17 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.contains("certified:        yes"));
  CHECK(r.contains("1 certified real solution"));

  std::ifstream txt(dir / "certificate.txt");
  REQUIRE(txt.good());
  std::ostringstream ss;
  ss << txt.rdbuf();
  CHECK(ss.str().find("# fermicert 0.1.0") == 0);
  CHECK(ss.str().find("certified:        yes") != std::string::npos);

  json cj = read_json(dir / "certificate.json");
  CHECK(cj.at("certificate").at("certified") == true);
  CHECK(cj.at("certificate").at("real") == true);
  CHECK(cj.at("certificate").at("intervals").size() == 15);
}

TEST_CASE("certify accepts the six-decimal grid via the csv loader") {
  auto dir = fresh_dir("certify_csv");
  RunResult r = run("certify " + data_file("vstar6.csv") +
                    " --slice v11=61/17 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.contains("1 certified real solution"));
}

TEST_CASE("certify rejects a far-off candidate with exit 1") {
  auto dir = fresh_dir("certify_bad");
  auto candidate = dir / "junk.txt";
  std::string line;
  for (int i = 0; i < 15; ++i) line += "1e8 ";
  write_text(candidate, line + "\n");
  RunResult r = run("certify " + candidate.string() +
                    " --slice v11=61/17 --out " + dir.string());
  CHECK(r.code == 1);
  CHECK(r.contains("0 certified real solutions"));
  json cj = read_json(dir / "certificate.json");
  CHECK(cj.at("certificate").at("certified") == false);
}

TEST_CASE("certify reports parse errors with the line number") {
  auto dir = fresh_dir("certify_parse");
  auto candidate = dir / "broken.txt";
  write_text(candidate, "1.0 2.0\n3.0 oops\n");
  RunResult r = run("certify " + candidate.string() +
                    " --slice v11=61/17 --out " + dir.string());
  CHECK(r.code == 2);
  CHECK(r.contains("line 2"));
  CHECK(r.contains("bad number 'oops'"));
}

TEST_CASE("certify validates the slice argument") {
  auto dir = fresh_dir("certify_slice");
  RunResult noeq = run("certify " + data_file("vstar.json") +
                       " --slice v11:61/17 --out " + dir.string());
  CHECK(noeq.code == 2);
  CHECK(noeq.contains("slice must look like v11=61/17"));

  RunResult outside = run("certify " + data_file("vstar.json") +
                          " --slice v99=1 --out " + dir.string());
  CHECK(outside.code == 2);
  CHECK(outside.contains("outside the 3x5 domain"));

  RunResult missing = run("certify " + data_file("vstar.json") + " --out " + dir.string());
  CHECK(missing.code == 2);
  CHECK(missing.contains("certify needs --slice"));
}

TEST_CASE("certify rejects a grid with the wrong shape") {
  auto dir = fresh_dir("certify_shape");
  RunResult r = run("certify " + data_file("vstar6.csv") +
                    " --q1 3 --q2 4 --slice v11=61/17 --out " + dir.string());
  CHECK(r.code == 2);
  CHECK(r.contains("grid is 3x5, expected 3x4"));
}

TEST_CASE("verify passes at a loose tolerance and fails at a tight one") {
  auto dir = fresh_dir("verify");
  RunResult loose = run("verify " + data_file("vstar.json") +
                        " --tol 1e-4 --out " + dir.string());
  CHECK(loose.code == 0);
  CHECK(loose.contains("max coefficient residual:"));
  CHECK(loose.contains("within tolerance"));

  json rj = read_json(dir / "residuals.json");
  double coeff = rj.at("residuals").at("max_coeff_residual").get<double>();
  CHECK(coeff > 0.0);
  CHECK(coeff <= 1e-4);

  RunResult tight = run("verify " + data_file("vstar.json") +
                        " --tol 1e-12 --out " + dir.string());
  CHECK(tight.code == 1);
  CHECK(tight.contains("exceeds tolerance"));
}

TEST_CASE("verify emits machine-readable output on request") {
  auto dir = fresh_dir("verify_json");
  RunResult r = run("verify " + data_file("vstar.json") +
                    " --format json --out " + dir.string());
  CHECK(r.code == 0);
  json j = json::parse(r.output);
  CHECK(j.at("residuals").contains("max_torus_residual"));
  CHECK(j.at("residuals").contains("mean"));
}

TEST_CASE("search certifies a real root of an explicit system") {
  auto dir = fresh_dir("search_toy");
  RunResult r = run("search --system " + data_file("toy_system.txt") +
                    " --seed 1 --budget 10 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.contains("certified real solution on path"));

  json sol = read_json(dir / "solution.json");
  auto ep = sol.at("endpoint");
  REQUIRE(ep.size() == 2);
  double x = ep[0][0].get<double>();
  double y = ep[1][0].get<double>();
  CHECK(std::abs(x * x - 2.0) < 1e-8);
  CHECK(std::abs(y - x) < 1e-8);
  CHECK(sol.at("certificate").at("real") == true);
  CHECK(fs::exists(dir / "search_checkpoint.json"));
}

TEST_CASE("search reports exhaustion when no real root exists") {
  auto dir = fresh_dir("search_norealroot");
  auto sysfile = dir / "norealroot.txt";
  write_text(sysfile, "v[1,1]^2 + 1\nv[2,1] - v[1,1]\n");
  RunResult r = run("search --system " + sysfile.string() +
                    " --seed 1 --budget 10 --out " + dir.string());
  CHECK(r.code == 1);
  CHECK(r.contains("no certified real solution among all 2 paths"));
}

TEST_CASE("search returns the budget code when paths remain") {
  auto dir = fresh_dir("search_budget");
  auto sysfile = dir / "norealroot.txt";
  write_text(sysfile, "v[1,1]^2 + 1\nv[2,1] - v[1,1]\n");
  RunResult r = run("search --system " + sysfile.string() +
                    " --seed 1 --budget 1 --out " + dir.string());
  CHECK(r.code == 3);
  CHECK(r.contains("budget exhausted, checkpoint saved"));

  json ck = read_json(dir / "search_checkpoint.json");
  CHECK(ck.at("paths_tracked") == 1);
  CHECK(ck.at("next_path_index") == "1");
}

TEST_CASE("search requires a slice or a system file") {
  RunResult r = run("search --budget 1");
  CHECK(r.code == 2);
  CHECK(r.contains("search needs --slice (or --system FILE)"));
}

TEST_CASE("search rejects an unreadable system file with exit 2") {
  auto dir = fresh_dir("search_badsys");
  auto sysfile = dir / "bad.txt";
  write_text(sysfile, "v[1,1]^2 - 2\nv[2,1] - v[1,1\n");
  RunResult r = run("search --system " + sysfile.string() +
                    " --seed 1 --budget 1 --out " + dir.string());
  CHECK(r.code == 2);
  CHECK(r.contains("error:"));
}

TEST_CASE("config files set defaults and flags override them") {
  auto dir = fresh_dir("config");
  auto cfgfile = dir / "run.ini";
  write_text(cfgfile, "q1=3\nq2=3\n");

  RunResult from_config = run("generate --config " + cfgfile.string() +
                              " --out " + dir.string());
  CHECK(from_config.code == 2);  // q2=3 came from the config file
  CHECK(from_config.contains("periods must be coprime"));

  RunResult overridden = run("generate --config " + cfgfile.string() +
                             " --q2 5 --out " + dir.string());
  CHECK(overridden.code == 0);
  json summary = read_json(dir / "generate_summary.json");
  CHECK(summary.at("config").at("q2") == 5);
}
