// SPDX-License-Identifier: Apache-2.0
#pragma once

// Special functions for real arguments: Γ, ψ, Bessel J and K, the
// regularized incomplete beta function, ₁F₂, probabilists' Hermite
// polynomials and the isotropic kernel Y_d. All functions are pure.

namespace lrd::specfun {

struct EvalOptions {
  double rel_tol = 1e-15;
  int max_terms = 600;

  /// Throws ParameterError unless rel_tol ∈ (0, 1e-3] and max_terms ≥ 32.
  void validate() const;
};

double gamma_fn(double x);
double log_gamma(double x);
double digamma_fn(double x);

/// J_ν(z) for ν ≥ -1/2, z ≥ 0. Ascending series below z = max(20, 2ν²),
/// Hankel asymptotic expansion above.
double bessel_j(double nu, double z);

/// K_ν(z), z > 0. Symmetric in ν by construction (only |ν| is used).
double bessel_k(double nu, double z);

/// Regularized incomplete beta I_μ(p, q), μ ∈ (0, 1].
double incomplete_beta(double mu, double p, double q);
/// Same, with 1 - μ supplied separately so values of μ close to 1 keep
/// full relative precision in the complement.
double incomplete_beta(double mu, double one_minus_mu, double p, double q);

/// ₁F₂(a; b1, b2; z).
double hyp1f2(double a, double b1, double b2, double z, const EvalOptions& opt = {});

/// Probabilists' Hermite polynomial He_k(w).
double hermite_poly(int k, double w);

/// Y_d(z) = 2^{(d-2)/2} Γ(d/2) J_{(d-2)/2}(z) z^{(2-d)/2}, with Y_d(0) = 1.
double y_d_kernel(int d, double z);

}  // namespace lrd::specfun
