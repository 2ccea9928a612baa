// SPDX-License-Identifier: Apache-2.0
#pragma once

// Isotropic covariance families with long memory, their spectral densities
// and the parameters (α, L, q, υ) that enter the convergence-rate bound.

#include <functional>
#include <span>
#include <string>

namespace lrd {

enum class Family { cauchy, linnik, local_global };

struct CovarianceModel {
  Family family = Family::cauchy;
  int d = 1;
  double theta = 0.0;
  double sigma = 2.0;  // generalized Linnik only
  double alpha = 0.0;  // local-global only

  static CovarianceModel cauchy(double theta, int d);
  static CovarianceModel linnik(double sigma, double theta, int d);
  static CovarianceModel local_global(double alpha, double theta, int d);

  /// Throws ParameterError when the parameters do not define a valid correlation.
  void validate() const;
  /// Decay exponent of B at infinity.
  double decay_exponent() const;
  /// True when the decay exponent lies in (0, d/2).
  bool long_memory() const { return decay_exponent() < 0.5 * d; }
  std::string family_name() const;
};

using SlowlyVarying = std::function<double(double)>;

struct LongMemoryParams {
  int d = 1;
  double alpha = 0.0;
  SlowlyVarying L;
  double q_max = 0.0;  // supremum of admissible q (open)
  double upsilon = 0.0;
};

double covariance_eval(const CovarianceModel& model, double r);

/// Throws RegimeError outside the long-memory regime, UnsupportedError for
/// the two-dimensional local-global model.
LongMemoryParams lrd_params(const CovarianceModel& model);

/// Γ((d-α)/2) / (2^α π^{d/2} Γ(α/2)).
double c2_constant(int d, double alpha);

/// Isotropic spectral density f(λ), λ > 0.
double spectral_density(const CovarianceModel& model, double lam);

/// c₂ λ^{α-d} L(1/λ).
double spectral_leading(const LongMemoryParams& params, double lam);

/// Least-squares slope of log|f/leading - 1| against log λ over a decreasing
/// grid in (0, 0.1] with at least 8 points.
double residual_exponent_fit(const CovarianceModel& model, std::span<const double> lam_grid);

/// sup over the grids of r^q |1 - L(t r)/L(r)|.
double slowly_varying_remainder(const SlowlyVarying& L, double q, std::span<const double> r_grid,
                                std::span<const double> t_grid);

/// Φ(z) = 2π^{d/2}/Γ(d/2) ∫₀^z u^{d-1} f(u) du.
double isotropic_measure(const CovarianceModel& model, double z);

using SpectralFn = std::function<double(double)>;

/// r^{α-d} L(r)^{-1} c₂^{-1} [λ₁^{d-α} λ₂^{d-α} f(λ₁/r) f(λ₂/r)]^{1/2}.
double qr_diagnostic(const CovarianceModel& model, double r, double lam1, double lam2);
double qr_diagnostic(const SpectralFn& f, const LongMemoryParams& params, double r, double lam1, double lam2);

}  // namespace lrd
