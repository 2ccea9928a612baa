// SPDX-License-Identifier: Apache-2.0
// Runs the lrdlab binary and inspects its CSV and manifest output.
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("lrdlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(LRDLAB_CLI) + " " + args + " 2>/dev/null";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("covariance and spectral") {
  Sandbox box;
  const auto out = box.path("cov.csv");
  REQUIRE(run("covariance eval --family cauchy --theta 0.2 --d 1 --r 0 1 3 --out " + out) == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"r", "covariance"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(std::pow(2.0, -0.2)).epsilon(1e-12));
  CHECK(std::stod(rows[3][1]) == doctest::Approx(std::pow(10.0, -0.2)).epsilon(1e-12));
  const auto manifest = Json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "covariance eval");
  CHECK(manifest["config"]["model"]["theta"] == 0.2);
  CHECK(manifest.contains("wall_seconds"));
  CHECK(manifest.contains("versions"));

  const auto fit = box.path("fit.csv");
  REQUIRE(run("spectral fit-upsilon --model '{\"family\":\"cauchy\",\"theta\":0.2,\"d\":1}' --out " + fit) == 0);
  const auto f = read_csv(fit);
  REQUIRE(f.size() == 2);
  CHECK(std::abs(std::stod(f[1][2]) - 0.6) < 0.05);

  const auto se = box.path("spec.csv");
  REQUIRE(run("spectral eval --family cauchy --theta 0.5 --d 2 --lambda 0.5 2 --out " + se) == 0);
  const auto s = read_csv(se);
  CHECK(std::stod(s[1][1]) == doctest::Approx(std::exp(-0.5) / (2 * M_PI * 0.5)).epsilon(1e-10));

  CHECK(run("covariance eval --family cauchy --theta -1 --d 1 --out " + out) != 0);
  CHECK(run("covariance eval --family cauchy --theta 0.2 --d 1 --bogus 3") != 0);
}

TEST_CASE("config file and overrides") {
  Sandbox box;
  const auto cfg = box.path("cfg.json");
  std::ofstream(cfg) << R"({"model":{"family":"cauchy","theta":0.2,"d":1},"r":[2],"out":")" << box.path("a.csv")
                     << "\"}";
  REQUIRE(run("--config " + cfg + " covariance eval") == 0);
  CHECK(std::stod(read_csv(box.path("a.csv"))[1][1]) == doctest::Approx(std::pow(5.0, -0.2)).epsilon(1e-12));
  // flags win over config keys
  REQUIRE(run("--config " + cfg + " covariance eval --theta 0.4 --out " + box.path("b.csv")) == 0);
  CHECK(std::stod(read_csv(box.path("b.csv"))[1][1]) == doctest::Approx(std::pow(5.0, -0.4)).epsilon(1e-12));
  // universal flags also after the subcommand
  REQUIRE(run("covariance eval --family cauchy --theta 0.2 --d 1 --r 1 --seed 3 --out " + box.path("c.csv")) == 0);
}

TEST_CASE("geometry, hermite, rate") {
  Sandbox box;
  REQUIRE(run("geometry ft --shape rect --lower -0.5 --upper 0.5 --t 0 2 --out " + box.path("ft.csv")) == 0);
  const auto ft = read_csv(box.path("ft.csv"));
  CHECK(std::stod(ft[1][1]) == doctest::Approx(1.0));
  CHECK(std::stod(ft[2][1]) == doctest::Approx(2 * std::sin(1.0) / 2.0).epsilon(1e-12));

  REQUIRE(run("hermite coeffs --functional h2 --order 4 --out " + box.path("h.csv")) == 0);
  const auto h = read_csv(box.path("h.csv"));
  REQUIRE(h.size() == 6);
  CHECK(std::stod(h[3][1]) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(Json::parse(slurp(box.path("h.csv.manifest.json")))["rank"] == 2);

  REQUIRE(run("rate bound --d 1 --alpha 0.25 --q 0.249 --upsilon 0.75 --out " + box.path("b.csv")) == 0);
  const auto b = read_csv(box.path("b.csv"));
  CHECK(std::stod(b[1][5]) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::stod(b[1][7]) == doctest::Approx(1.0 / 18.0).epsilon(1e-12));

  REQUIRE(run("rate curves --preset linnik-d2 --points 9 --out " + box.path("c.csv")) == 0);
  CHECK(read_csv(box.path("c.csv")).size() == 10);

  REQUIRE(run("verify supmin --d 1 --alpha 0.25 --q 0.249 --upsilon 0.75 --resolution 400 --out " +
              box.path("s.csv")) == 0);
  const auto s = read_csv(box.path("s.csv"));
  REQUIRE(s.size() == 5);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::stod(s[i][3]) < 1e-2);
}

TEST_CASE("simulation and limit law") {
  Sandbox box;
  REQUIRE(run("simulate field --family cauchy --theta 0.2 --d 1 --extent 8 --seed 5 --snapshot " +
              box.path("f.bin") + " --out " + box.path("f.csv")) == 0);
  const auto f = read_csv(box.path("f.csv"));
  CHECK(f.size() == 34);
  CHECK(fs::file_size(box.path("f.bin")) == 8 + 8 + 8 + 33 * 8);
  REQUIRE(run("simulate field --family cauchy --theta 0.2 --d 1 --extent 8 --seed 5 --out " + box.path("g.csv")) == 0);
  CHECK(slurp(box.path("f.csv")) == slurp(box.path("g.csv")));

  REQUIRE(run("rosenblatt build --alpha 0.25 --kernel-nodes 100 --kernel-cutoff 50 --calibration none --series " +
              box.path("s.json") + " --out " + box.path("e.csv")) == 0);
  CHECK(read_csv(box.path("e.csv")).size() > 2);
  REQUIRE(run("rosenblatt sample --series " + box.path("s.json") + " --n 1000 --seed 2 --out " + box.path("x.csv")) ==
          0);
  REQUIRE(run("rosenblatt sample --series " + box.path("s.json") + " --n 1000 --seed 2 --threads 4 --out " +
              box.path("y.csv")) == 0);
  CHECK(read_csv(box.path("x.csv")).size() == 1001);
  CHECK(slurp(box.path("x.csv")) == slurp(box.path("y.csv")));
}

TEST_CASE("rate experiment") {
  Sandbox box;
  const std::string common =
      "rate experiment --r 4 8 --replicates 1000 --reference-size 20000 --bootstrap 10 --kernel-nodes 200 "
      "--kernel-cutoff 100 --seed 11 ";
  REQUIRE(run(common + "--threads 1 --out " + box.path("one.csv")) == 0);
  REQUIRE(run(common + "--threads 8 --out " + box.path("eight.csv")) == 0);
  CHECK(slurp(box.path("one.csv")) == slurp(box.path("eight.csv")));
  const auto rows = read_csv(box.path("one.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"r", "replicates", "rho", "rho_stderr", "kappa_bound"});
  const auto m = Json::parse(slurp(box.path("one.csv.manifest.json")));
  CHECK(m["seeds"][0] == 11);
  CHECK(m["row_runtimes"].size() == 2);
  CHECK(m["reference"].contains("mode"));
  CHECK(m["slope_fit"].contains("error"));
  CHECK(run("rate experiment --functional identity --r 4 8 --out " + box.path("z.csv")) != 0);
}
