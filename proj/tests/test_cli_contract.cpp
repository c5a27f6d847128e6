// End-to-end contract checks against the installed CLI binary (argv[1]).
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_contract <path-to-cli>\n";
    return 2;
  }
  std::string cli = argv[1];
  std::string dir = "/tmp/gh_cli_contract";
  run("rm -rf " + dir + " && mkdir -p " + dir);

  // malformed CSV: exit 2 with a line-numbered message
  write(dir + "/bad.csv", "x1,value\n0.5,1.0\noops,zzz\n");
  check(run(cli + " transform --analyze " + dir + "/bad.csv --degree 2 --out " + dir +
            "/x.json 2>" + dir + "/err.txt") == 2,
        "malformed CSV exits 2");
  check(slurp(dir + "/err.txt").find("line 3") != std::string::npos,
        "message carries the line number");

  // analyze/synthesize round trip on rule nodes
  write(dir + "/h2.json", "{\"n\":1,\"coeffs\":[{\"beta\":[2],\"c\":1.0}]}");
  check(run(cli + " transform --synthesize " + dir + "/h2.json --grid-order 10 --out " + dir +
            "/grid.csv") == 0,
        "synthesize exits 0");
  check(run(cli + " transform --analyze " + dir + "/grid.csv --degree 4 --out " + dir +
            "/back.json") == 0,
        "analyze exits 0");
  std::string back = slurp(dir + "/back.json");
  check(back.find("\"beta\":[2],\"c\":0.9999999999") != std::string::npos ||
            back.find("\"beta\":[2],\"c\":1") != std::string::npos,
        "round trip recovers the coefficient");

  // grid not on rule nodes: precondition failure, exit 3
  write(dir + "/offgrid.csv", "x1,value\n0.5,1.0\n1.5,2.0\n");
  check(run(cli + " transform --analyze " + dir + "/offgrid.csv --degree 1 --out " + dir +
            "/y.json 2>/dev/null") == 3,
        "non-rule grid exits 3");

  // operator maximal on the constant: all-ones column
  write(dir + "/one.json", "{\"n\":1,\"coeffs\":[{\"beta\":[0],\"c\":1.0}]}");
  check(run(cli + " operator --name maximal --input " + dir + "/one.json --params '{\"a\":1}' " +
            "--grid-order 6 --out " + dir + "/max.csv") == 0,
        "operator maximal exits 0");
  {
    std::istringstream in(slurp(dir + "/max.csv"));
    std::string line;
    std::getline(in, line);
    bool all_ones = true;
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      all_ones = all_ones && line.substr(line.find(',') + 1) == "1";
    }
    check(rows == 6 && all_ones, "maximal of constant is the all-ones column");
  }

  // unknown operator / unknown suite: exit 2
  check(run(cli + " operator --name bogus --input " + dir + "/one.json --out " + dir +
            "/z.csv 2>/dev/null") == 2,
        "unknown operator exits 2");
  check(run(cli + " verify bogus 2>/dev/null") == 2, "unknown suite exits 2");

  // degenerate atom ball: precondition, exit 3
  check(run(cli + " atom --ball '{\"center\":[100000.0],\"radius\":1e-9,\"scale\":2}' --out " +
            dir + "/a.json 2>/dev/null") == 3,
        "degenerate ball exits 3");

  // atom then molecule round trip
  check(run(cli + " atom --ball '{\"center\":[1.0],\"radius\":0.5,\"scale\":2}' --seed 3 --out " +
            dir + "/atom.json") == 0,
        "atom exits 0");
  check(run(cli + " molecule --atom " + dir + "/atom.json --N 1 --alpha 36 --out " + dir +
            "/mol.csv > " + dir + "/mol.txt") == 0,
        "molecule exits 0");
  check(slurp(dir + "/mol.csv").find("k,annulus_norm") == 0, "molecule report header");

  // verify: pass and determinism across runs and thread counts
  check(run(cli + " verify mnp1 --seed 5 --scale 0.02 >/dev/null") == 0, "verify mnp1 exits 0");
  std::string base = " all --seed 7 --scale 0.01 --config '{\"params\":{\"atoms\":3,\"family\":3,"
                     "\"functions\":2,\"t_levels\":6,\"radii\":2,\"grid_order\":8}}'";
  check(run(cli + base + " --threads 1 --results-dir " + dir + "/r1 >/dev/null") == 0,
        "verify all exits 0");
  check(run(cli + base + " --threads 4 --results-dir " + dir + "/r2 >/dev/null") == 0,
        "verify all (threads) exits 0");
  check(!slurp(dir + "/r1/manifest.json").empty(), "manifest written");
  check(slurp(dir + "/r1/manifest.json") == slurp(dir + "/r2/manifest.json"),
        "manifests byte-identical across thread counts");

  // GH_RESULTS_DIR override
  check(run("GH_RESULTS_DIR=" + dir + "/renv " + cli + " verify mnp1 --seed 5 --scale 0.02 "
            ">/dev/null") == 0,
        "env results dir run");
  check(!slurp(dir + "/renv/mnp1/mnp1.csv").empty(), "GH_RESULTS_DIR honored");

  // unknown config keys rejected
  check(run(cli + " verify mnp1 --config '{\"bogus\":1}' 2>/dev/null") == 2,
        "unknown config key exits 2");

  if (failures == 0) {
    std::cout << "cli_contract: all checks passed\n";
    return 0;
  }
  std::cout << "cli_contract: " << failures << " failures\n";
  return 1;
}
