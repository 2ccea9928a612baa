// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "lrdlab/covmodels.hpp"
#include "lrdlab/errors.hpp"
#include "lrdlab/quadrature.hpp"

using namespace lrd;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> log_grid(double hi, double lo, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1)));
  return g;
}
}  // namespace

TEST_CASE("covariance values") {
  const auto c = CovarianceModel::cauchy(0.1, 1);
  CHECK(covariance_eval(c, 0.0) == 1.0);
  CHECK(covariance_eval(c, 1.0) == Approx(0.93303299153680741).epsilon(1e-14));
  const auto lg = CovarianceModel::local_global(0.4, 0.25, 1);
  CHECK(covariance_eval(lg, 1.0) == Approx(0.25 / 0.65).epsilon(1e-14));
  const double below = 1.0 - 0.4 / 0.65;  // the r ≤ 1 branch at r = 1
  CHECK(std::abs(covariance_eval(lg, 1.0) - below) < 1e-12);
  CHECK(std::abs(covariance_eval(lg, 1.0 + 1e-12) - covariance_eval(lg, 1.0)) < 1e-11);
  const auto lin = CovarianceModel::linnik(1.5, 0.4, 1);
  CHECK(covariance_eval(lin, 2.0) == Approx(std::pow(1.0 + std::pow(2.0, 1.5), -0.4)).epsilon(1e-14));

  CHECK_THROWS_AS(CovarianceModel::cauchy(-0.1, 1), ParameterError);
  CHECK_THROWS_AS(CovarianceModel::linnik(2.5, 0.3, 1), ParameterError);
  CHECK_THROWS_AS(CovarianceModel::local_global(0.4, 1.2, 1), ParameterError);
  CHECK_THROWS_AS(CovarianceModel::local_global(0.4, 0.3, 3), ParameterError);
}

TEST_CASE("long-memory parameters") {
  auto p = lrd_params(CovarianceModel::cauchy(0.2, 1));
  CHECK(p.alpha == Approx(0.4));
  CHECK(p.upsilon == Approx(0.6));
  CHECK(p.q_max == Approx(0.1));
  p = lrd_params(CovarianceModel::cauchy(0.5, 4));
  CHECK(p.alpha == Approx(1.0));
  CHECK(p.upsilon == Approx(2.0));
  p = lrd_params(CovarianceModel::linnik(1.75, 1.0 / 3.0, 2));
  CHECK(p.alpha == Approx(7.0 / 12.0));
  CHECK(p.upsilon == Approx(17.0 / 12.0));
  p = lrd_params(CovarianceModel::local_global(0.4, 0.5, 1));
  CHECK(p.upsilon == Approx(0.6));
  CHECK(p.L(5.0) == Approx(0.5 / 0.9));
  CHECK(p.L(0.5) == Approx(covariance_eval(CovarianceModel::local_global(0.4, 0.5, 1), 0.5) * std::pow(0.5, 0.4)));

  CHECK_THROWS_AS(lrd_params(CovarianceModel::cauchy(0.3, 1)), RegimeError);
  CHECK_THROWS_AS(lrd_params(CovarianceModel::linnik(1.0, 1.2, 2)), RegimeError);
  CHECK_THROWS_AS(lrd_params(CovarianceModel::local_global(0.4, 0.5, 2)), UnsupportedError);

  // r^α B(r) / L(r) → 1
  const CovarianceModel models[] = {CovarianceModel::cauchy(0.2, 1), CovarianceModel::linnik(1.75, 1.0 / 3.0, 2),
                                    CovarianceModel::local_global(0.4, 0.5, 1)};
  for (const auto& m : models) {
    const auto q = lrd_params(m);
    const double r = 1e4;
    CHECK(std::abs(std::pow(r, q.alpha) * covariance_eval(m, r) / q.L(r) - 1.0) < 1e-3);
  }
}

TEST_CASE("c2 constant") {
  CHECK(c2_constant(1, 0.5) == Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-12));
  for (int d = 1; d <= 4; ++d) CHECK(c2_constant(d, 0.5 * d) == Approx(std::pow(2 * kPi, -0.5 * d)).epsilon(1e-12));
  CHECK(c2_constant(3, 1.0) == Approx(1.0 / (2 * kPi * kPi)).epsilon(1e-12));
  CHECK_THROWS_AS(c2_constant(2, 2.0), DomainError);
}

TEST_CASE("spectral densities") {
  const auto c = CovarianceModel::cauchy(0.5, 2);
  for (double lam = 0.1; lam <= 10.0; lam *= 1.3)
    CHECK(spectral_density(c, lam) == Approx(std::exp(-lam) / (2 * kPi * lam)).epsilon(1e-12));
  CHECK(spectral_density(c, 1.0) == Approx(0.058549831524319168).epsilon(1e-12));

  // mpmath quadrature of the Linnik integral (cross-checked by Fourier inversion of B for d=1)
  CHECK(spectral_density(CovarianceModel::linnik(1.5, 0.4, 1), 1.0) == Approx(0.0894291287354998721).epsilon(1e-10));
  CHECK(spectral_density(CovarianceModel::linnik(1.75, 1.0 / 3.0, 2), 0.3) ==
        Approx(0.399104859407215625).epsilon(1e-10));
  CHECK(spectral_density(CovarianceModel::linnik(1.0, 0.5, 3), 2.0) == Approx(0.00169166033534684249).epsilon(1e-10));

  // σ = 2 reduces to the Cauchy family
  for (int d = 1; d <= 3; ++d) {
    for (double theta : {0.2, 0.45}) {
      for (double lam : {0.01, 0.3, 1.0, 4.0}) {
        const double a = spectral_density(CovarianceModel::linnik(2.0, theta, d), lam);
        const double b = spectral_density(CovarianceModel::cauchy(theta, d), lam);
        CAPTURE(d);
        CAPTURE(lam);
        CHECK(std::abs(a / b - 1.0) < 1e-6);
      }
    }
  }

  // mpmath evaluation of the ₁F₂ representation
  const auto lg = CovarianceModel::local_global(0.4, 0.5, 1);
  const double lg_want[][2] = {{0.01, 2.38254433910056481},
                               {0.5, 0.164174678145355475},
                               {3, 0.0183032175437076515},
                               {30, 0.000537192658868245156},
                               {200, 0.0000313368619239788056}};
  for (const auto& w : lg_want) CHECK(spectral_density(lg, w[0]) == Approx(w[1]).epsilon(1e-9));
  const auto lgp = lrd_params(lg);
  const double lead = c2_constant(1, 0.4) * (0.5 / 0.9) * std::pow(0.01, -0.6);
  CHECK(std::abs(spectral_density(lg, 0.01) / lead - 1.0) < 3.0 * std::pow(0.01, 0.6));
  CHECK(spectral_leading(lgp, 0.01) == Approx(lead).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_density(CovarianceModel::local_global(0.4, 0.5, 2), 1.0), UnsupportedError);

  const CovarianceModel all[] = {CovarianceModel::cauchy(0.2, 1), CovarianceModel::cauchy(0.5, 2),
                                 CovarianceModel::linnik(1.75, 1.0 / 3.0, 2), CovarianceModel::linnik(1.0, 1.0, 3),
                                 lg};
  for (const auto& m : all)
    for (double lam = 1e-4; lam <= 100.0; lam *= 3.7) CHECK(spectral_density(m, lam) > 0.0);
}

TEST_CASE("spectral tails") {
  const auto c = CovarianceModel::cauchy(0.2, 1);
  const auto lin = CovarianceModel::linnik(1.75, 1.0 / 3.0, 2);
  double cmax = 0.0, lmin = 1e300, lmax = 0.0;
  for (double lam = 10.0; lam <= 1000.0; lam *= 1.6) {
    cmax = std::max(cmax, lam * spectral_density(c, lam));
    const double v = std::pow(lam, 2 + 1.75) * spectral_density(lin, lam);
    lmin = std::min(lmin, v);
    lmax = std::max(lmax, v);
  }
  CHECK(cmax < 1.0);
  // Linnik tail is a genuine power law: bounded above and away from zero
  CHECK(lmax / lmin < 2.0);
}

TEST_CASE("spectral leading term") {
  auto p = lrd_params(CovarianceModel::cauchy(0.2, 1));
  CHECK(spectral_leading(p, 1.0) == Approx(c2_constant(1, 0.4) * p.L(1.0)).epsilon(1e-14));
  CHECK(spectral_leading(p, 0.01) ==
        Approx(c2_constant(1, 0.4) * std::pow(0.01, -0.6) * std::pow(1 + 1e-4, -0.2)).epsilon(1e-13));
  LongMemoryParams exact{2, 0.7, [](double) { return 1.0; }, 0.3, 1.0};
  CHECK(spectral_leading(exact, 0.37) == Approx(c2_constant(2, 0.7) * std::pow(0.37, -1.3)).epsilon(1e-14));
}

TEST_CASE("residual exponents") {
  CHECK(residual_exponent_fit(CovarianceModel::cauchy(0.2, 1), log_grid(1e-2, 1e-5, 12)) == Approx(0.6).epsilon(0.05 / 0.6));
  CHECK(residual_exponent_fit(CovarianceModel::linnik(1.75, 1.0 / 3.0, 2), log_grid(1e-4, 1e-6, 10)) ==
        Approx(17.0 / 12.0).epsilon(0.05 / (17.0 / 12.0)));
  CHECK(residual_exponent_fit(CovarianceModel::local_global(0.4, 0.5, 1), log_grid(1e-3, 1e-6, 12)) ==
        Approx(0.6).epsilon(0.05 / 0.6));
  // At d=4, θ=1/2 the λ² terms cancel and the residual is O(λ³); υ = 2 remains a valid lower bound.
  const double s4 = residual_exponent_fit(CovarianceModel::cauchy(0.5, 4), log_grid(1e-2, 1e-4, 10));
  CHECK(s4 == Approx(3.0).epsilon(0.1 / 3.0));
  CHECK(s4 >= lrd_params(CovarianceModel::cauchy(0.5, 4)).upsilon);
  CHECK(residual_exponent_fit(CovarianceModel::cauchy(0.3, 4), log_grid(1e-2, 1e-4, 10)) == Approx(2.0).epsilon(0.05));

  CHECK_THROWS_AS(residual_exponent_fit(CovarianceModel::cauchy(0.2, 1), log_grid(1e-2, 1e-5, 5)), InputError);
  CHECK_THROWS_AS(residual_exponent_fit(CovarianceModel::cauchy(0.2, 1), log_grid(1.0, 1e-5, 10)), InputError);
}

TEST_CASE("slowly varying remainder") {
  std::vector<double> rg, tg;
  for (double r = 10; r <= 1e5; r *= 2) rg.push_back(r);
  for (double t = 1; t <= 100; t *= 1.5) tg.push_back(t);
  CHECK(slowly_varying_remainder([](double) { return 0.7; }, 1.0, rg, tg) == 0.0);
  const auto L = lrd_params(CovarianceModel::cauchy(0.2, 1)).L;
  const double bounded = slowly_varying_remainder(L, 1.9, rg, tg);
  std::vector<double> rg_long = rg;
  for (double r = rg.back() * 2; r <= 1e8; r *= 2) rg_long.push_back(r);
  CHECK(slowly_varying_remainder(L, 1.9, rg_long, tg) == Approx(bounded).epsilon(1e-6));
  // ln t has no remainder of any polynomial order: the sup keeps growing with the grid
  auto logL = [](double t) { return std::log(t); };
  std::vector<double> r_short, r_far;
  for (double r = 1e5; r <= 1e6; r *= 2) r_short.push_back(r);
  for (double r = 1e5; r <= 1e12; r *= 2) r_far.push_back(r);
  CHECK(slowly_varying_remainder(logL, 0.1, r_far, tg) > 1.8 * slowly_varying_remainder(logL, 0.1, r_short, tg));
  CHECK_THROWS_AS(slowly_varying_remainder(L, 1.0, std::vector<double>{1, 10}, tg), InputError);
}

TEST_CASE("isotropic spectral measure") {
  const auto c2d = CovarianceModel::cauchy(0.5, 2);
  CHECK(isotropic_measure(c2d, 0.0) == 0.0);
  CHECK(isotropic_measure(c2d, 1.0) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-8));
  CHECK(std::abs(isotropic_measure(CovarianceModel::cauchy(0.2, 1), 1e3) - 1.0) < 1e-3);
  CHECK(std::abs(isotropic_measure(CovarianceModel::linnik(1.75, 1.0 / 3.0, 2), 1e3) - 1.0) < 1e-3);
}

TEST_CASE("Q_r diagnostic") {
  LongMemoryParams exact{1, 0.4, [](double) { return 1.0; }, 0.1, 1.0};
  auto power = [](double lam) { return c2_constant(1, 0.4) * std::pow(lam, -0.6); };
  for (double r : {1.0, 7.0, 300.0}) CHECK(qr_diagnostic(power, exact, r, 0.3, 2.5) == Approx(1.0).epsilon(1e-12));

  const auto c = CovarianceModel::cauchy(0.2, 1);
  double prev = 1e300;
  for (double r = 10.0; r <= 1e4; r *= 10.0) {
    const double dev = std::abs(qr_diagnostic(c, r, 1.0, 2.0) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("Fourier inversion reconstructs the covariance") {
  const auto c = CovarianceModel::cauchy(0.2, 1);
  for (double r : {0.5, 1.0, 2.5, 5.0}) {
    // B(r) = 2 ∫₀^∞ f(λ) cos(λ r) dλ; the singular head is integrated with tanh-sinh
    auto head = quad::tanh_sinh([&](double lam, double, double) { return spectral_density(c, lam) * std::cos(lam * r); },
                                0.0, 1.0);
    std::vector<double> pts;
    for (double x = 1.0; x < 1e3; x += 1.0) pts.push_back(x);
    pts.push_back(1e3);
    auto body = quad::integrate([&](double lam) { return spectral_density(c, lam) * std::cos(lam * r); },
                                std::span<const double>(pts));
    CAPTURE(r);
    CHECK(std::abs(2.0 * (head.value + body.value) - covariance_eval(c, r)) < 1e-3);
  }
}
