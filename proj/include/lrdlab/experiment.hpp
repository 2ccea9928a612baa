// SPDX-License-Identifier: Apache-2.0
#pragma once

// Monte Carlo experiments: Kolmogorov distance between the normalized
// functional 2K_r/(C₂ r^{d-α} L(r)) and the second-chaos limit law, over a
// grid of r, with bootstrap errors and a log-log slope fit.

#include <cstdint>
#include <string>
#include <vector>

#include "lrdlab/covmodels.hpp"
#include "lrdlab/geometry.hpp"
#include "lrdlab/rosenblatt.hpp"
#include "lrdlab/stats.hpp"

namespace lrd {

struct ExperimentConfig {
  CovarianceModel model = CovarianceModel::cauchy(0.2, 1);
  DomainSet set = DomainSet::rect({-0.5}, {0.5});
  std::string functional = "h2";
  std::vector<double> r_grid = {8, 16, 32, 64, 128};
  std::size_t replicates = 1000;
  std::size_t reference_size = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;                // CSV path (empty: stdout)

  double h = 0.5;                 // lattice step
  double q = 0.0;                 // 0: 0.999 q_max
  int hermite_quad_order = 2000;
  int kernel_nodes = 820;         // per half-axis / ray
  double kernel_cutoff = 400.0;
  int kernel_angles = 24;         // d = 2
  double reference_tail = 1e-3;   // eigen-series truncation (squared mass)
  std::size_t bootstrap = 200;

  void validate() const;
};

struct RhoRow {
  double r = 0.0;
  std::size_t replicates = 0;
  double rho = 0.0;
  double rho_stderr = 0.0;
  double kappa_bound = 0.0;
  double runtime_seconds = 0.0;  // reported in the manifest, not in the CSV
};

struct ReferenceInfo {
  std::size_t size = 0;
  std::size_t terms = 0;
  double variance_oracle = 0.0;
  double calibration = 1.0;   // √(oracle / 2Σλ²) before any correction
  double gaussian_tail = 0.0;
  std::string mode;           // "rescale" or "gaussian-tail"
};

struct RhoTable {
  std::vector<RhoRow> rows;
  double C2 = 0.0;
  double alpha = 0.0;
  double kappa_bound = 0.0;
  double q = 0.0;
  double upsilon = 0.0;
  ReferenceInfo reference;
};

/// Eigen series of the limit law for (Δ, α), calibrated against the
/// distance-integral oracle. Rescaled when the factor is within [0.97, 1.03],
/// completed with a normal tail otherwise. Cached per (Δ, α, grid).
const EigenSeries& reference_series(const DomainSet& set, double alpha, const ExperimentConfig& config);

/// Throws RankError unless the functional has Hermite rank 2.
RhoTable rate_experiment(const ExperimentConfig& config);

/// The normalized statistic for every replicate at one r (index r_index in
/// the seed derivation), in replicate order.
std::vector<double> normalized_replicates(const ExperimentConfig& config, std::size_t r_index);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
  double kappa_bound = 0.0;
  bool consistent = false;  // -slope >= kappa_bound - 2 slope_stderr (reported only)
};

/// Least squares of log ρ on log r over rows with ρ > 3 stderr; needs >= 4 of
/// them, otherwise DegenerateFitError.
SlopeFit slope_fit(const RhoTable& table);

struct SmoothingRow {
  double eps = 0.0;
  double lhs = 0.0;        // ρ(X + Y, Z)
  double rho_xz = 0.0;
  double rho_shift = 0.0;  // ρ(Z + ε, Z)
  double p_tail = 0.0;     // P(|Y| >= ε)
  double rhs = 0.0;
  double slack = 0.0;      // rhs + tol - lhs
  double kde_bound = 0.0;  // ε max f̂_Z
  bool holds = false;
};

/// ρ(X+Y, Z) <= ρ(X, Z) + ρ(Z+ε, Z) + P(|Y| >= ε) on samples; tol absorbs
/// Monte Carlo error (tol < 0: 3 √(2/n)).
std::vector<SmoothingRow> smoothing_inequality_check(const std::vector<double>& x, const std::vector<double>& y,
                                                     const std::vector<double>& z, const std::vector<double>& eps,
                                                     double tol = -1.0);
/// Synthetic triple from a reference sample (>= 10^5 draws): X and Z are
/// its two halves, Y = noise_scale · N(0, 1).
std::vector<SmoothingRow> smoothing_inequality_check(const std::vector<double>& reference,
                                                     const std::vector<double>& eps, double noise_scale,
                                                     std::uint64_t seed);

}  // namespace lrd
