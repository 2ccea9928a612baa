// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/ratelab.hpp"

#include <algorithm>
#include <cmath>

#include "lrdlab/errors.hpp"

namespace lrd {

namespace {

void check_alpha(int d, double alpha) {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 0.5 * d)) throw ParameterError("alpha must lie in (0, d/2)");
}

// Best of f over n interior points of (lo, hi), then the same search on the
// two cells around the winner.
template <class F>
std::pair<double, double> line_search(F&& f, double lo, double hi, const SupMinSearch& s) {
  auto pass = [&](double a, double b) {
    double best = -INFINITY, arg = a;
    const double step = (b - a) / (s.resolution + 1);
    for (int i = 1; i <= s.resolution; ++i) {
      const double x = a + i * step;
      const double v = f(x);
      if (v > best) {
        best = v;
        arg = x;
      }
    }
    return std::pair{best, arg};
  };
  auto [best, arg] = pass(lo, hi);
  if (s.refine) {
    const double step = (hi - lo) / (s.resolution + 1);
    auto [b2, a2] = pass(std::max(lo, arg - step), std::min(hi, arg + step));
    if (b2 > best) {
      best = b2;
      arg = a2;
    }
  }
  return {best, arg};
}

SupMinReport report(double grid, double closed, std::vector<double> arg) {
  return {grid, closed, std::abs(grid - closed), std::move(arg)};
}

}  // namespace

void RateInputs::validate() const {
  check_alpha(d, alpha);
  if (!(q > 0.0)) throw ParameterError("q must be positive");
  if (!(upsilon > 0.0)) throw ParameterError("upsilon must be positive");
}

double harmonic_term(int d, double alpha, double upsilon) {
  check_alpha(d, alpha);
  if (!(upsilon > 0.0)) throw ParameterError("upsilon must be positive");
  return 1.0 / (2.0 / (d - 2 * alpha) + 2.0 / (d + 1 - 2 * alpha) + 1.0 / upsilon);
}

double kappa1(const RateInputs& in) {
  in.validate();
  return 2.0 * std::min(in.q, harmonic_term(in.d, in.alpha, in.upsilon));
}

double geometric_term(int d, double alpha) {
  check_alpha(d, alpha);
  return alpha * (d - 2 * alpha) / (d - alpha);
}

double kappa_bound(const RateInputs& in) { return std::min(geometric_term(in.d, in.alpha), kappa1(in)) / 3.0; }

double supmin_inner(int d, double alpha, double gamma) {
  check_alpha(d, alpha);
  if (!(gamma >= 0.0) || !(gamma < 1.0)) throw ParameterError("gamma must lie in [0, 1)");
  return gamma * (d - 2 * alpha) * (d + 1 - 2 * alpha) / (2 * d + 1 - 4 * alpha);
}

double supmin_outer(int d, double alpha, double upsilon) { return 2.0 * harmonic_term(d, alpha, upsilon); }

SupMinReport supmin_inner_check(int d, double alpha, double gamma, const SupMinSearch& search) {
  const double closed = supmin_inner(d, alpha, gamma);
  auto f = [&](double g0) { return std::min((gamma - g0) * (d - 2 * alpha), g0 * (d + 1 - 2 * alpha)); };
  const auto [best, arg] = line_search(f, 0.0, gamma, search);
  return report(best, closed, {arg});
}

SupMinReport supmin_outer_check(int d, double alpha, double upsilon, const SupMinSearch& search) {
  const double closed = supmin_outer(d, alpha, upsilon);
  // nested brute force: the inner sup is searched, not taken from the closed form
  double arg_inner = 0.0;
  auto outer = [&](double gamma) {
    const auto inner = [&](double g0) { return std::min((gamma - g0) * (d - 2 * alpha), g0 * (d + 1 - 2 * alpha)); };
    return std::min(2.0 * upsilon * (1.0 - gamma), line_search(inner, 0.0, gamma, search).first);
  };
  const auto [best, gamma] = line_search(outer, 0.0, 1.0, search);
  auto inner = [&](double g0) { return std::min((gamma - g0) * (d - 2 * alpha), g0 * (d + 1 - 2 * alpha)); };
  arg_inner = line_search(inner, 0.0, gamma, search).second;
  return report(best, closed, {gamma, arg_inner});
}

SupMinReport kappa0_identity_check(int d, double alpha, double q, double upsilon, const SupMinSearch& search) {
  RateInputs in{d, alpha, q, upsilon};
  const double closed = kappa1(in) / 3.0;
  // min(β, A - 2β) is increasing in A, so the (γ, γ₀) part can be maximized first
  auto A = [&](double gamma, double g0) {
    return std::min({2.0 * upsilon * (1.0 - gamma), 2.0 * q, (gamma - g0) * (d - 2 * alpha), g0 * (d + 1 - 2 * alpha)});
  };
  auto best_over_g0 = [&](double gamma) { return line_search([&](double g0) { return A(gamma, g0); }, 0.0, gamma, search); };
  const auto [a_star, gamma] = line_search([&](double g) { return best_over_g0(g).first; }, 0.0, 1.0, search);
  const double g0 = best_over_g0(gamma).second;
  const double beta_hi = std::max(a_star, 1e-12);
  const auto [best, beta] = line_search([&](double b) { return std::min(b, a_star - 2.0 * b); }, 0.0, beta_hi, search);
  return report(best, closed, {beta, gamma, g0});
}

SupMinReport beta_check(double c, const SupMinSearch& search) {
  if (!(c > 0.0)) throw ParameterError("beta_check: c must be positive");
  const auto [best, beta] = line_search([c](double b) { return std::min(b, c - 2.0 * b); }, 0.0, c, search);
  return report(best, c / 3.0, {beta});
}

CurveSpec curve_preset(const std::string& name) {
  CurveSpec s;
  s.label = name;
  if (name == "cauchy-d1") {
    s.d = 1;
    s.q = [](double a) { return 0.999 * (0.5 - a); };
    s.upsilon = [](double a) { return 1.0 - a; };
  } else if (name == "linnik-d2") {
    s.d = 2;
    s.q = [](double) { return 1.75; };
    s.upsilon = [](double) { return 17.0 / 12.0; };
  } else if (name == "linnik-d3") {
    s.d = 3;
    s.q = [](double) { return 1.0; };
    s.upsilon = [](double) { return 1.0; };
  } else {
    throw InputError("unknown curve preset '" + name + "'");
  }
  return s;
}

std::vector<std::string> curve_presets() { return {"cauchy-d1", "linnik-d2", "linnik-d3"}; }

std::vector<CurveRow> curve_table(const CurveSpec& spec, const std::vector<double>& alpha_grid) {
  std::vector<CurveRow> rows;
  rows.reserve(alpha_grid.size());
  for (double a : alpha_grid) {
    const RateInputs in{spec.d, a, spec.q(a), spec.upsilon(a)};
    const double k1 = kappa1(in);
    const double g = geometric_term(spec.d, a);
    rows.push_back({a, k1 / 3.0, g / 3.0, std::min(g, k1) / 3.0});
  }
  return rows;
}

std::vector<double> alpha_grid(int d, int n) {
  if (n < 1) throw ParameterError("alpha_grid: n must be >= 1");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = 0.5 * d * (i + 1.0) / (n + 1.0);
  return g;
}

}  // namespace lrd
