// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "lrdlab/descriptors.hpp"
#include "lrdlab/errors.hpp"
#include "lrdlab/experiment.hpp"
#include "lrdlab/rng.hpp"
#include "lrdlab/stats.hpp"

using namespace lrd;
using doctest::Approx;

namespace {

RhoTable power_law(double c, double slope, const std::vector<double>& r, double noise, std::uint64_t seed) {
  RhoTable t;
  auto eng = make_engine({seed});
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double x : r) {
    RhoRow row;
    row.r = x;
    row.rho = c * std::pow(x, slope) * (1.0 + noise * u(eng));
    row.rho_stderr = 1e-4;
    t.rows.push_back(row);
  }
  t.kappa_bound = 0.05;
  return t;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.r_grid = {4, 8, 16};
  c.replicates = 1000;
  c.reference_size = 20000;
  c.bootstrap = 20;
  c.kernel_nodes = 200;
  c.kernel_cutoff = 100;
  c.seed = 7;
  return c;
}

}  // namespace

TEST_CASE("ks distance") {
  const std::vector<double> a{1, 3}, b{2}, z0{0}, z1{1};
  CHECK(ks_distance(a, b) == 0.5);
  CHECK(ks_distance(z0, z1) == 1.0);
  CHECK(ks_distance(a, a) == 0.0);
  const std::vector<double> ties{1, 1, 2}, other{1, 2, 2};
  CHECK(ks_distance(ties, other) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(ks_distance(a, std::vector<double>{}), InputError);

  // metric properties on random triples
  auto eng = make_engine({11});
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(37), y(53), z(20);
    for (auto& v : x) v = g(eng);
    for (auto& v : y) v = 0.3 + g(eng);
    for (auto& v : z) v = 1.5 * g(eng);
    const double xy = ks_distance(x, y), yx = ks_distance(y, x);
    CHECK(xy == yx);
    CHECK(xy <= ks_distance(x, z) + ks_distance(z, y) + 1e-15);
    CHECK(xy >= 0.0);
    CHECK(xy <= 1.0);
  }
}

TEST_CASE("slope fit") {
  const std::vector<double> r{8, 16, 32, 64, 128};
  const auto exact = slope_fit(power_law(0.7, -0.2, r, 0.0, 1));
  CHECK(std::abs(exact.slope + 0.2) < 1e-12);
  CHECK(exact.intercept == Approx(std::log(0.7)).epsilon(1e-12));
  CHECK(exact.r2 == Approx(1.0).epsilon(1e-12));
  CHECK(exact.points == 5);
  CHECK(exact.consistent);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto noisy = slope_fit(power_law(0.7, -0.2, r, 0.01, seed));
    CHECK(std::abs(noisy.slope + 0.2) < 0.02);
  }

  auto floor = power_law(0.01, -0.2, r, 0.0, 1);
  for (auto& row : floor.rows) row.rho_stderr = row.rho;
  CHECK_THROWS_AS(slope_fit(floor), DegenerateFitError);
  CHECK_THROWS_AS(slope_fit(power_law(0.7, -0.2, {8, 16, 32}, 0.0, 1)), DegenerateFitError);
}

TEST_CASE("smoothing inequality") {
  auto eng = make_engine({3});
  std::normal_distribution<double> g;
  const std::size_t n = 100000;
  std::vector<double> x(n), z(n), zero(n, 0.0), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = g(eng);
    z[i] = g(eng);
    y[i] = 0.1 * g(eng);
  }
  for (const auto& row : smoothing_inequality_check(x, zero, z, {0.05, 0.2})) {
    CHECK(row.lhs == row.rho_xz);
    CHECK(row.p_tail == 0.0);
    CHECK(row.holds);
  }
  const auto rows = smoothing_inequality_check(x, y, z, {0.2});
  CHECK(rows[0].holds);
  CHECK(rows[0].slack > 0.0);
  // ε max f for a standard normal
  CHECK(rows[0].kde_bound == Approx(0.2 / std::sqrt(2 * M_PI)).epsilon(0.05));
  CHECK(rows[0].rho_shift <= rows[0].kde_bound + 3.0 * std::sqrt(2.0 / n));

  std::vector<double> ref(200000);
  for (auto& v : ref) v = g(eng) * g(eng);
  for (const auto& row : smoothing_inequality_check(ref, {0.01, 0.1, 0.5}, 0.1, 5)) {
    CAPTURE(row.eps);
    CHECK(row.holds);
  }
  CHECK_THROWS_AS(smoothing_inequality_check(std::vector<double>(1000, 0.0), {0.1}, 0.1, 5), InputError);
}

TEST_CASE("experiment determinism and errors") {
  auto c = small_config();
  const auto one = rate_experiment(c);
  c.threads = 8;
  const auto eight = rate_experiment(c);
  REQUIRE(one.rows.size() == 3);
  CHECK(rho_table_csv(one).str() == rho_table_csv(eight).str());
  for (const auto& row : one.rows) {
    CHECK(row.rho >= 0.0);
    CHECK(row.rho <= 1.0);
    CHECK(row.rho_stderr > 0.0);
    CHECK(row.replicates == 1000);
  }
  CHECK(one.C2 == Approx(2.0).epsilon(1e-12));
  CHECK(one.kappa_bound == Approx(0.4 * 0.2 / 0.6 / 3).epsilon(1e-12));

  // the first-order functional does not have rank 2
  auto id = small_config();
  id.functional = "identity";
  CHECK_THROWS_AS(rate_experiment(id), RankError);

  auto bad = small_config();
  bad.replicates = 999;
  CHECK_THROWS_AS(rate_experiment(bad), ParameterError);
  bad = small_config();
  bad.r_grid = {8, 4};
  CHECK_THROWS_AS(rate_experiment(bad), ParameterError);

  // same reference object across calls
  const auto cfg = small_config();
  CHECK(&reference_series(cfg.set, 0.4, cfg) == &reference_series(cfg.set, 0.4, cfg));
}

TEST_CASE("seed swap stability") {
  auto a = small_config();
  auto b = small_config();
  b.seed = 8;
  const auto ta = rate_experiment(a), tb = rate_experiment(b);
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    CAPTURE(ta.rows[i].r);
    const double se = std::hypot(ta.rows[i].rho_stderr, tb.rows[i].rho_stderr);
    CHECK(std::abs(ta.rows[i].rho - tb.rows[i].rho) < 3.0 * se);
    CHECK(ta.rows[i].rho != tb.rows[i].rho);
  }
}

TEST_CASE("descriptors") {
  const Json m = {{"family", "cauchy"}, {"theta", 0.2}, {"d", 1}};
  CHECK(model_to_json(model_from_json(m)) == m);
  const Json l = {{"family", "linnik"}, {"sigma", 1.75}, {"theta", 1.0 / 3.0}, {"d", 2}};
  CHECK(model_to_json(model_from_json(l)) == l);
  CHECK_THROWS_AS(model_from_json({{"family", "matern"}, {"theta", 1}, {"d", 1}}), InputError);
  CHECK_THROWS_AS(model_from_json({{"family", "cauchy"}, {"d", 1}}), InputError);
  CHECK_THROWS_AS(model_from_json({{"family", "cauchy"}, {"theta", 0.2}, {"d", 1}, {"nu", 1}}), InputError);

  const Json ball = {{"shape", "ball"}, {"R", 1.0}, {"d", 2}};
  CHECK(set_to_json(set_from_json(ball)) == ball);
  const Json rect = {{"shape", "rect"}, {"a", {-1.0}}, {"b", {1.0}}};
  CHECK(set_to_json(set_from_json(rect)) == rect);
  CHECK_THROWS_AS(set_from_json({{"shape", "square"}}), InputError);

  auto c = config_from_json({{"r_grid", {2, 4, 8, 16}}, {"seed", 99}, {"functional", "abs-centered"}});
  CHECK(c.r_grid.size() == 4);
  CHECK(c.seed == 99);
  CHECK(c.replicates == ExperimentConfig{}.replicates);
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK_THROWS_AS(config_from_json({{"replicate", 5}}), InputError);

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(M_PI)) == M_PI);

  CsvTable csv({"a", "b"});
  csv.add_row(std::vector<double>{1.5, -2});
  csv.add_row(std::vector<std::string>{"x", "y"});
  CHECK(csv.str() == "a,b\n1.5,-2\nx,y\n");
  CHECK_THROWS_AS(csv.add_row(std::vector<double>{1}), InputError);

  const auto man = run_manifest("rate experiment", config_to_json(c), {99}, 1.25, {{"extra", 3}});
  CHECK(man["seeds"][0] == 99);
  CHECK(man["extra"] == 3);
  CHECK(man.contains("versions"));
  CHECK(man.contains("protocol_note"));
  CHECK(man["wall_seconds"] == 1.25);
}
