#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>

#include "primeq/certificate.hpp"
#include "primeq/io.hpp"
#include "primeq/matrix.hpp"

using namespace primeq;

namespace {

const std::string cli = PRIMEQ_CLI_PATH;
const std::string data_dir = PRIMEQ_DATA_DIR;
const std::string golden_a = data_dir + "/paperA.mat";
const std::string golden_b = data_dir + "/paperB.mat";

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = "cli_test_stdout.txt";
  const std::string err_path = "cli_test_stderr.txt";
  const std::string cmd =
      cli + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("cli validate answers with text and exit code") {
  RunResult ok = run("validate " + golden_a + " --p 0 --M 2,3,5,6,7 --K \"\"");
  REQUIRE(ok.code == 0);
  REQUIRE(ok.out == "valid\n");

  // Column 0 is already covered by the member rows.
  RunResult bad =
      run("validate " + golden_a + " --p 0 --M 2,3,5,6,7 --K 0");
  REQUIRE(bad.code == 1);
  REQUIRE(bad.out == "invalid\n");
}

TEST_CASE("cli apply prints the rewritten matrix and round trips") {
  RunResult r = run("apply " + golden_a + " --p 0 --M 2,3,5,6,7 --K \"\"");
  REQUIRE(r.code == 0);
  REQUIRE(parse_matrix(r.out) == read_matrix_file(golden_b));

  // Writing to a file matches stdout output.
  RunResult f = run("apply " + golden_a +
                    " --p 0 --M 2,3,5,6,7 --K \"\" -o cli_test_apply.mat");
  REQUIRE(f.code == 0);
  REQUIRE(read_matrix_file("cli_test_apply.mat") ==
          read_matrix_file(golden_b));
  std::remove("cli_test_apply.mat");

  // An invalid transfer is a semantic failure, not a usage error.
  RunResult bad = run("apply " + golden_a + " --p 0 --M 2,3 --K \"\"");
  REQUIRE(bad.code == 1);
  REQUIRE(bad.err.find("not valid") != std::string::npos);
}

TEST_CASE("cli enumerate lists transfers one per line") {
  write_file("cli_test_zero.mat", "3\n000\n000\n000\n");
  RunResult r = run("enumerate cli_test_zero.mat");
  REQUIRE(r.code == 0);
  REQUIRE(r.out ==
          "p=0;M=1;K=\n"
          "p=0;M=2;K=\n"
          "p=0;M=1,2;K=\n"
          "p=1;M=0;K=\n"
          "p=1;M=2;K=\n"
          "p=1;M=0,2;K=\n"
          "p=2;M=0;K=\n"
          "p=2;M=1;K=\n"
          "p=2;M=0,1;K=\n");

  RunResult trivial = run("enumerate cli_test_zero.mat --include-trivial");
  REQUIRE(trivial.code == 0);
  int lines = 0;
  for (const char c : trivial.out) lines += c == '\n';
  REQUIRE(lines == 12);
  std::remove("cli_test_zero.mat");
}

TEST_CASE("cli graph prints vertices, edges and components") {
  RunResult r = run("graph " + golden_a + " --p 0 --M 2,3,5,6,7 --K \"\"");
  REQUIRE(r.code == 0);
  REQUIRE(r.out ==
          "vertices 2,3,5,6,7\n"
          "edge 3 3\n"
          "edge 6 5\n"
          "edge 6 7\n"
          "edge 7 6\n"
          "component 2\n"
          "component 3\n"
          "component 5,6,7\n");
}

TEST_CASE("cli decompose and verify cooperate") {
  RunResult d = run("decompose " + golden_a +
                    " --p 0 --M 2,3,5,6,7 --K \"\" -o cli_test_cert.json");
  REQUIRE(d.code == 0);
  REQUIRE(d.out.find("6 moves") != std::string::npos);

  RunResult v = run("verify cli_test_cert.json");
  REQUIRE(v.code == 0);
  REQUIRE(v.out.find("ok") == 0);

  // Tamper with the recorded final matrix.
  MoveSequence seq = read_certificate_file("cli_test_cert.json");
  seq.final_matrix.set_entry(4, 4, true);
  write_certificate_file("cli_test_cert.json", seq);
  RunResult bad = run("verify cli_test_cert.json");
  REQUIRE(bad.code == 1);
  REQUIRE(bad.out.find("failed") == 0);
  std::remove("cli_test_cert.json");

  write_file("cli_test_broken.json", "{ not json");
  RunResult broken = run("verify cli_test_broken.json");
  REQUIRE(broken.code == 2);
  std::remove("cli_test_broken.json");
}

TEST_CASE("cli decompose can embed intermediates") {
  RunResult d = run("decompose " + golden_a +
                    " --p 0 --M 2,3,5,6,7 --K \"\" --embed-intermediates"
                    " -o cli_test_cert_embed.json");
  REQUIRE(d.code == 0);
  const MoveSequence seq = read_certificate_file("cli_test_cert_embed.json");
  REQUIRE(seq.intermediates.size() == seq.moves.size() + 1);
  std::remove("cli_test_cert_embed.json");
}

TEST_CASE("cli equivalent decides and can emit a certificate") {
  RunResult eq = run("equivalent " + golden_a + " " + golden_b +
                     " -o cli_test_eq.json");
  REQUIRE(eq.code == 0);
  REQUIRE(eq.out.find("equivalent") == 0);
  RunResult v = run("verify cli_test_eq.json");
  REQUIRE(v.code == 0);
  std::remove("cli_test_eq.json");

  write_file("cli_test_zero.mat", "3\n000\n000\n000\n");
  write_file("cli_test_ones.mat", "3\n111\n111\n111\n");
  RunResult ne = run("equivalent cli_test_zero.mat cli_test_ones.mat");
  REQUIRE(ne.code == 1);
  REQUIRE(ne.out.find("not equivalent") == 0);

  RunResult capped =
      run("equivalent " + golden_a + " " + golden_b + " --max-states 1");
  REQUIRE(capped.code == 3);
  REQUIRE(capped.out.find("unknown") == 0);
  std::remove("cli_test_zero.mat");
  std::remove("cli_test_ones.mat");
}

TEST_CASE("cli classify writes an atlas and enforces the size limit") {
  RunResult r = run("classify --n 2 -o cli_test_atlas.txt");
  REQUIRE(r.code == 0);
  const std::string atlas = slurp("cli_test_atlas.txt");
  REQUIRE(atlas.find("# primitive-equivalence atlas\nn 2\nfilter all\n"
                     "classes 6\ncanonical_forms 10\nmatrices 16\n") == 0);
  std::remove("cli_test_atlas.txt");

  RunResult irr = run("classify --n 2 --filter irreducible -o -");
  REQUIRE(irr.code == 0);
  REQUIRE(irr.out.find("filter irreducible\n") != std::string::npos);

  REQUIRE(run("classify --n 5 -o cli_test_atlas.txt").code == 2);
  REQUIRE(run("classify --n 0 -o cli_test_atlas.txt").code == 2);
  REQUIRE(run("classify --n 2 --threads 0 -o cli_test_atlas.txt").code == 2);
}

TEST_CASE("cli reports malformed matrix files with positions") {
  write_file("cli_test_bad.mat", "2\n013\n10\n");
  RunResult r = run("validate cli_test_bad.mat --p 0 --M 1 --K \"\"");
  REQUIRE(r.code == 2);
  REQUIRE(r.err.find("cli_test_bad.mat:2:3") != std::string::npos);
  std::remove("cli_test_bad.mat");

  RunResult missing = run("validate cli_test_missing.mat --p 0 --M 1 --K \"\"");
  REQUIRE(missing.code == 2);
  REQUIRE(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("cli usage errors exit with code 2 and help with 0") {
  REQUIRE(run("").code == 2);
  REQUIRE(run("frobnicate").code == 2);
  REQUIRE(run("validate").code == 2);  // missing required options
  REQUIRE(run("validate " + golden_a + " --p 0 --M 1,,2 --K \"\"").code == 2);
  REQUIRE(run("validate " + golden_a + " --p 0 --M 9 --K \"\"").code == 2);
  REQUIRE(run("--help").code == 0);
  RunResult help = run("--help");
  REQUIRE(help.out.find("paperA.mat") != std::string::npos);
  REQUIRE(run("equivalent --help").code == 0);
}
