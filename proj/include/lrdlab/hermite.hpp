// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hermite expansions of functionals of a standard Gaussian variable:
// coefficients C_j = E[G(w) He_j(w)], rank detection and Parseval checks.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lrd {

using Functional = std::function<double(double)>;

struct HermiteExpansion {
  std::vector<double> coeffs;  // C_0 .. C_J
  int order = 0;               // J
  int quad_order = 0;
  std::optional<int> rank;     // with the default tolerance
};

/// Gauss-Hermite rule for the weight φ(w) = e^{-w²/2}/√(2π) (weights sum to 1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

/// C_j for j = 0..J. The coefficients are recomputed with a rule 50% larger
/// and AccuracyError is thrown if they move by more than stability_tol
/// (relative to max |C_j|).
HermiteExpansion hermite_coefficients(const Functional& G, int J, int quad_order, double stability_tol = 5e-3);

/// Smallest j ≥ 1 with |C_j| > tol; tol < 0 selects 1e-8 max_j |C_j|.
int hermite_rank(const HermiteExpansion& exp, double tol = -1.0);

/// E[G²] - Σ_{j≤J} C_j²/j!.
double parseval_defect(const Functional& G, const HermiteExpansion& exp);

/// Σ_{j≤J} C_j He_j(w)/j!.
double truncated_eval(const HermiteExpansion& exp, double w);

/// Built-in functionals: "h2", "square", "abs-centered", "identity".
Functional functional_by_name(const std::string& name);
std::vector<std::string> functional_names();

}  // namespace lrd
