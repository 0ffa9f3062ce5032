#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const std::string& capture = "") {
  std::string cmd = std::string(TRACEPERM_CLI_PATH) + " " + args;
  if (capture.empty())
    cmd += " > /dev/null 2>&1";
  else
    cmd += " > " + capture + " 2>&1";
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path tmp(const char* name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("verify-family exit codes follow the pass/usage contract") {
  REQUIRE(run_cli("verify-family --case a --q 5") == 0);
  REQUIRE(run_cli("verify-family --case c --q 5") == 2);   // q = 2 (mod 3)
  REQUIRE(run_cli("verify-family --case z --q 5") == 2);
  REQUIRE(run_cli("verify-family --case a") == 2);         // missing --q
  REQUIRE(run_cli("verify-family --case i --q 3") == 2);   // missing l, r
  REQUIRE(run_cli("no-such-command") == 2);
  REQUIRE(run_cli("") == 2);
  REQUIRE(run_cli("--help") == 0);

  auto out = tmp("traceperm_cli_vf.txt");
  REQUIRE(run_cli("verify-family --case i --q 3 --l 1 --r 1", out.string()) == 0);
  auto text = slurp(out);
  REQUIRE(text.find("0 instances") != std::string::npos);
  REQUIRE(text.find("4l divides n") != std::string::npos);

  REQUIRE(run_cli("verify-family --case i --q 3 --l 1 --r 2", out.string()) == 0);
  text = slurp(out);
  REQUIRE(text.find("8 instance(s), all pass") != std::string::npos);
  fs::remove(out);
}

TEST_CASE("classify prints the explanation or calls out a non-permutation") {
  auto out = tmp("traceperm_cli_classify.txt");

  REQUIRE(run_cli("classify --field 7^2 --n 2 --k 10 --gamma 6", out.string()) == 0);
  REQUIRE(slurp(out).find("sporadic:q7-n2-k10") != std::string::npos);

  REQUIRE(run_cli("classify --field 5^2 --n 2 --k 9 --gamma 3", out.string()) == 0);
  auto text = slurp(out);
  REQUIRE(text.find("family:abd") != std::string::npos);
  REQUIRE(text.find("index=3") != std::string::npos);

  REQUIRE(run_cli("classify --field 3^2 --n 2 --k 2 --gamma 1", out.string()) == 0);
  REQUIRE(slurp(out).find("not a permutation") != std::string::npos);

  // gamma as a coefficient list resolves to the same element as its index
  REQUIRE(run_cli("classify --field 3^4 --n 2 --k 33 --gamma 2,2,1,0", out.string()) == 0);
  text = slurp(out);
  REQUIRE(text.find("index=17") != std::string::npos);
  REQUIRE(text.find("sporadic:q9-n2-k33") != std::string::npos);

  REQUIRE(run_cli("classify --field 3^4 --n 3 --k 5 --gamma 1") == 2);  // 3 does not divide 4
  REQUIRE(run_cli("classify --field 6^2 --n 2 --k 5 --gamma 1") == 2);
  REQUIRE(run_cli("classify --field 5^2 --n 2 --k 9 --gamma nine") == 2);
  REQUIRE(run_cli("classify --field 5^2 --n 2 --k 9 --gamma 99") == 2);
  REQUIRE(run_cli("classify --field 5^2 --n 2 --k 0 --gamma 3") == 2);
  fs::remove(out);
}

TEST_CASE("census writes byte-identical records regardless of worker count") {
  auto a = tmp("traceperm_cli_census_a.jsonl");
  auto b = tmp("traceperm_cli_census_b.jsonl");
  auto log = tmp("traceperm_cli_census_log.txt");

  REQUIRE(run_cli("census --max-order 100 --out " + a.string(), log.string()) == 0);
  REQUIRE(run_cli("census --max-order 100 --threads 3 --out " + b.string()) == 0);
  REQUIRE(slurp(a) == slurp(b));
  REQUIRE_FALSE(slurp(a).empty());

  auto text = slurp(log);
  REQUIRE(text.find("sporadic: q=7 n=2 k=10") != std::string::npos);
  REQUIRE(text.find("sporadic: q=9 n=2 k=33") != std::string::npos);
  REQUIRE(text.find("0 unexplained") != std::string::npos);

  // checkpoint resume keeps the records identical
  auto ck = tmp("traceperm_cli_census_ck.jsonl");
  fs::remove(ck);
  REQUIRE(run_cli("census --max-order 100 --checkpoint " + ck.string() + " --out " + b.string()) == 0);
  REQUIRE(slurp(a) == slurp(b));
  REQUIRE(run_cli("census --max-order 100 --checkpoint " + ck.string() + " --out " + b.string()) == 0);
  REQUIRE(slurp(a) == slurp(b));
  fs::remove(ck);

  // even characteristic lies outside the classification, so hits there
  // surface as unexplained and flip the exit code
  REQUIRE(run_cli("census --max-order 65 --include-even", log.string()) == 1);
  REQUIRE(slurp(log).find("UNEXPLAINED") != std::string::npos);

  fs::remove(a);
  fs::remove(b);
  fs::remove(log);
}

TEST_CASE("check subcommand covers the documented properties") {
  auto out = tmp("traceperm_cli_check.txt");

  REQUIRE(run_cli("check --prop redsq2 --q 7") == 0);
  REQUIRE(run_cli("check --prop surj --q 5 --n 2 --count 25 --seed 11") == 0);
  REQUIRE(run_cli("check --prop surj --q 5 --n 2 --k 9 --gamma 3") == 0);
  REQUIRE(run_cli("check --prop zlem --q 3 --n 2 --count 25") == 0);
  REQUIRE(run_cli("check --prop zlem --q 5 --n 2 --coeffs 1,0,3") == 0);
  REQUIRE(run_cli("check --prop redsq1 --q 5 --n 2 --k 9 --gamma 3") == 0);
  REQUIRE(run_cli("check --prop identities --which case7 --q 5") == 0);
  REQUIRE(run_cli("check --prop identities --which case8 --q 3") == 0);
  REQUIRE(run_cli("check --prop identities --which case9 --q 3 --l 1 --n 4") == 0);

  REQUIRE(run_cli("check --prop translator --case i --q 3 --l 1 --r 2", out.string()) == 0);
  REQUIRE(slurp(out).find("delta = 0") != std::string::npos);
  REQUIRE(run_cli("check --prop translator --case a --q 5", out.string()) == 0);
  REQUIRE(slurp(out).find("not a translator") != std::string::npos);
  REQUIRE(run_cli("check --prop translator --q 5 --n 2 --k 9 --gamma 3", out.string()) == 0);
  REQUIRE(slurp(out).find("not a translator") != std::string::npos);

  REQUIRE(run_cli("check --prop bogus --q 3") == 2);
  REQUIRE(run_cli("check --prop surj") == 2);                       // missing --q
  REQUIRE(run_cli("check --prop identities --which case6 --q 3") == 2);
  REQUIRE(run_cli("check --prop redsq1 --q 5 --n 2 --k 9") == 2);   // missing gamma
  fs::remove(out);
}
