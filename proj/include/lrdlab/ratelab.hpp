// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exponents of the Kolmogorov-distance bound for rank-2 functionals and
// brute-force checks of the sup-min identities behind them.

#include <functional>
#include <string>
#include <vector>

namespace lrd {

struct RateInputs {
  int d = 1;
  double alpha = 0.25;
  double q = 0.0;
  double upsilon = 0.0;

  /// Throws ParameterError unless 0 < α < d/2, q > 0, υ > 0.
  void validate() const;
  /// q < d/2 - α, the range in which the bound is proved.
  bool within_theorem() const { return q < 0.5 * d - alpha; }
};

/// (2/(d-2α) + 2/(d+1-2α) + 1/υ)^{-1}
double harmonic_term(int d, double alpha, double upsilon);
/// 2 min(q, harmonic_term)
double kappa1(const RateInputs& in);
/// α(d-2α)/(d-α)
double geometric_term(int d, double alpha);
/// min(geometric_term, κ₁)/3, the supremum of admissible exponents.
double kappa_bound(const RateInputs& in);

/// sup over γ₀ ∈ (0, γ) of min((γ-γ₀)(d-2α), γ₀(d+1-2α)).
double supmin_inner(int d, double alpha, double gamma);
/// sup over γ ∈ (0, 1) of min(2υ(1-γ), supmin_inner(γ)).
double supmin_outer(int d, double alpha, double upsilon);

struct SupMinSearch {
  int resolution = 1000;  // interior points per axis
  bool refine = true;     // second pass of the same size around the argmax
};

struct SupMinReport {
  double grid_value = 0.0;
  double closed_form = 0.0;
  double deviation = 0.0;
  std::vector<double> argmax;  // coordinates of the best grid point
};

SupMinReport supmin_inner_check(int d, double alpha, double gamma, const SupMinSearch& search = {});
SupMinReport supmin_outer_check(int d, double alpha, double upsilon, const SupMinSearch& search = {});
/// sup over (β, γ, γ₀) of min(β, 2υ(1-γ)-2β, 2q-2β, (γ-γ₀)(d-2α)-2β, γ₀(d+1-2α)-2β) against κ₁/3.
/// argmax is (β, γ, γ₀).
SupMinReport kappa0_identity_check(int d, double alpha, double q, double upsilon, const SupMinSearch& search = {});
/// sup over β of min(β, c - 2β) on a grid, against c/3.
SupMinReport beta_check(double c, const SupMinSearch& search = {});

struct CurveSpec {
  int d = 1;
  std::function<double(double)> q;        // as functions of α
  std::function<double(double)> upsilon;
  std::string label;
};

/// Named settings: "cauchy-d1" (υ = 1-α, q → d/2-α), "linnik-d2" (q = 7/4,
/// υ = 17/12), "linnik-d3" (q = υ = 1).
CurveSpec curve_preset(const std::string& name);
std::vector<std::string> curve_presets();

struct CurveRow {
  double alpha, kappa1_over_3, geometric_term_over_3, kappa_bound;
};

/// Throws ParameterError for α outside (0, d/2).
std::vector<CurveRow> curve_table(const CurveSpec& spec, const std::vector<double>& alpha_grid);
/// n points strictly inside (0, d/2).
std::vector<double> alpha_grid(int d, int n);

}  // namespace lrd
