// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lrdlab/errors.hpp"
#include "lrdlab/hermite.hpp"
#include "lrdlab/rng.hpp"
#include "lrdlab/specfun.hpp"

using namespace lrd;
using doctest::Approx;

namespace {
const double kRoot2OverPi = std::sqrt(2.0 / std::numbers::pi);
}

TEST_CASE("Gauss-Hermite rule") {
  const auto rule = gauss_hermite(40);
  double fact_k = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k > 0) fact_k *= k;
    for (int j = 0; j <= 10; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * specfun::hermite_poly(j, rule.nodes[i]) * specfun::hermite_poly(k, rule.nodes[i]);
      CHECK(std::abs(s - (j == k ? fact_k : 0.0)) < 1e-8 * std::max(1.0, fact_k));
    }
  }
  // large orders stay well conditioned
  const auto big = gauss_hermite(500);
  double w = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < big.nodes.size(); ++i) {
    w += big.weights[i];
    m4 += big.weights[i] * std::pow(big.nodes[i], 4);
  }
  CHECK(w == Approx(1.0).epsilon(1e-12));
  CHECK(m4 == Approx(3.0).epsilon(1e-11));
}

TEST_CASE("coefficients of polynomial functionals") {
  const auto h2 = hermite_coefficients(functional_by_name("h2"), 8, 20);
  for (int j = 0; j <= 8; ++j) CHECK(std::abs(h2.coeffs[j] - (j == 2 ? 2.0 : 0.0)) < 1e-10);
  const auto sq = hermite_coefficients(functional_by_name("square"), 6, 20);
  CHECK(sq.coeffs[0] == Approx(1.0).epsilon(1e-12));
  CHECK(sq.coeffs[2] == Approx(2.0).epsilon(1e-12));
  for (int j : {1, 3, 4, 5, 6}) CHECK(std::abs(sq.coeffs[j]) < 1e-10);
}

TEST_CASE("coefficients of |w|") {
  // the kink at 0 limits Gauss-Hermite to O(1/n) accuracy
  const auto e = hermite_coefficients([](double w) { return std::abs(w); }, 6, 400);
  CHECK(std::abs(e.coeffs[0] - kRoot2OverPi) < 1e-3);
  CHECK(std::abs(e.coeffs[2] - kRoot2OverPi) < 1e-3);
  CHECK(std::abs(e.coeffs[4] + kRoot2OverPi) < 3e-3);
  for (int j : {1, 3, 5}) CHECK(std::abs(e.coeffs[j]) < 1e-10);
}

TEST_CASE("Hermite rank") {
  CHECK(hermite_rank(hermite_coefficients(functional_by_name("identity"), 4, 20)) == 1);
  CHECK(hermite_rank(hermite_coefficients(functional_by_name("abs-centered"), 4, 200)) == 2);
  CHECK(hermite_rank(hermite_coefficients(functional_by_name("h2"), 4, 20)) == 2);
  CHECK(*hermite_coefficients(functional_by_name("h2"), 4, 20).rank == 2);
  const auto constant = hermite_coefficients([](double) { return 3.0; }, 4, 20);
  CHECK_THROWS_AS(hermite_rank(constant), RankError);
  CHECK_FALSE(constant.rank.has_value());
  CHECK_THROWS_AS(functional_by_name("cube"), InputError);
}

TEST_CASE("Parseval defect") {
  const auto h2g = functional_by_name("h2");
  CHECK(std::abs(parseval_defect(h2g, hermite_coefficients(h2g, 4, 20))) < 1e-10);
  auto absg = [](double w) { return std::abs(w); };
  const double want = 1.0 - (2.0 + 1.0 + 1.0 / 12.0) / std::numbers::pi;
  CHECK(std::abs(parseval_defect(absg, hermite_coefficients(absg, 4, 400)) - want) < 3e-3);
  double prev = 1e300;
  for (int J = 2; J <= 10; J += 2) {
    const double d = parseval_defect(absg, hermite_coefficients(absg, J, 400));
    CHECK(d <= prev);
    CHECK(d > -1e-10);
    prev = d;
  }
}

TEST_CASE("truncated expansion") {
  CHECK(truncated_eval(hermite_coefficients(functional_by_name("h2"), 4, 20), 0.0) == Approx(-1.0).epsilon(1e-12));
  CHECK(truncated_eval(hermite_coefficients(functional_by_name("square"), 4, 20), 2.0) == Approx(4.0).epsilon(1e-12));
  const auto e = hermite_coefficients([](double w) { return std::abs(w); }, 12, 400);
  CHECK(std::abs(truncated_eval(e, 1.0) - 1.0) < 0.05);
}

TEST_CASE("unstable quadrature is reported") {
  auto step = [](double w) { return w > 0.3 ? 1.0 : 0.0; };
  CHECK_THROWS_AS(hermite_coefficients(step, 2, 4), AccuracyError);
  CHECK_THROWS_AS(hermite_coefficients(step, 6, 12), AccuracyError);
  CHECK_THROWS_AS(hermite_coefficients(step, 6, 40, 1e-3), AccuracyError);
}

TEST_CASE("bivariate moment identity") {
  const std::size_t n = 1000000;
  for (double rho : {0.3, 0.7}) {
    auto eng = make_engine({2024, static_cast<std::uint64_t>(rho * 10)});
    std::normal_distribution<double> g;
    double s[5][5] = {}, s2[5][5] = {};
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g(eng);
      const double y = rho * x + c * g(eng);
      double hx[5], hy[5];
      for (int k = 0; k < 5; ++k) {
        hx[k] = specfun::hermite_poly(k, x);
        hy[k] = specfun::hermite_poly(k, y);
      }
      for (int k = 0; k < 5; ++k)
        for (int m = 0; m < 5; ++m) {
          const double v = hx[k] * hy[m];
          s[k][m] += v;
          s2[k][m] += v * v;
        }
    }
    double fact = 1.0;
    for (int k = 0; k < 5; ++k) {
      if (k > 0) fact *= k;
      for (int m = 0; m < 5; ++m) {
        const double mean = s[k][m] / n;
        const double se = std::sqrt(std::max(s2[k][m] / n - mean * mean, 0.0) / n);
        const double want = k == m ? fact * std::pow(rho, k) : 0.0;
        CAPTURE(rho);
        CAPTURE(k);
        CAPTURE(m);
        if (k == 0 && m == 0) {
          CHECK(mean == 1.0);
        } else {
          CHECK(std::abs(mean - want) < 3.0 * se);
        }
      }
    }
  }
}
