// SPDX-License-Identifier: Apache-2.0
#pragma once

// Lattice simulation of a stationary isotropic Gaussian field by circulant
// embedding, and the integral functionals of the field over Δ(r).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lrdlab/covmodels.hpp"
#include "lrdlab/geometry.hpp"
#include "lrdlab/hermite.hpp"

namespace lrd {

struct SimulationPlan {
  CovarianceModel model;
  int d = 1;             // 1 or 2
  double h = 0.5;        // lattice step
  double extent = 1.0;   // the field covers [-extent, extent]^d
  std::uint64_t seed = 0;
  double padding = 4.0;  // torus side over field side

  void validate() const;
  /// Lattice points per axis of the returned field (odd, centred on 0).
  std::int64_t points_per_axis() const;
  /// FFT length per axis of the embedding torus.
  std::int64_t torus_size() const;
};

/// Extent large enough for Δ(r) (bounding box plus one cell).
double required_extent(const DomainSet& set, double r, double h);

struct TorusSpectrum {
  int d = 1;
  std::int64_t m = 0;               // torus length per axis
  std::vector<double> amplitude;    // √(λ_k / m^d), m^d entries
  double min_eigenvalue = 0.0;      // before clamping
  double max_eigenvalue = 0.0;
  std::size_t clamped = 0;          // number of negative eigenvalues set to 0
};

/// Eigenvalues of the (block-)circulant embedding of the lattice covariance.
/// Throws EmbeddingError if min < -1e-8 max.
TorusSpectrum circulant_spectrum(const SimulationPlan& plan);

/// circulant_spectrum, doubling the padding until the embedding is
/// nonnegative (at most max_doublings times). The plan is updated.
TorusSpectrum grow_embedding(SimulationPlan& plan, int max_doublings = 6);

struct GridField {
  int d = 1;
  std::int64_t n = 0;     // points per axis
  double h = 0.0;
  double origin = 0.0;    // coordinate of index 0 on every axis
  std::vector<double> values;  // row-major, last axis fastest

  double coordinate(std::int64_t i) const { return origin + static_cast<double>(i) * h; }
};

/// One draw from the plan's seed.
GridField simulate_field(const SimulationPlan& plan);
/// One draw with a precomputed spectrum and a caller-owned generator.
GridField simulate_field(const SimulationPlan& plan, const TorusSpectrum& spectrum, std::mt19937_64& eng);

/// Flat indices of the lattice points lying in Δ(r). Throws CoverageError if
/// Δ(r) is not inside the lattice (up to half a cell).
std::vector<std::size_t> window_indices(const GridField& field, const DomainSet& set, double r);

/// Midpoint sum Σ G(η(x_i)) h^d over lattice points of Δ(r).
double functional_integral(const GridField& field, const Functional& G, const DomainSet& set, double r);
double functional_integral(const GridField& field, const Functional& G, const std::vector<std::size_t>& window);

/// 2 kr / (C₂ r^{d-α} L(r)); throws RankError when C₂ = 0.
double normalized_statistic(double kr, double C2, double r, const LongMemoryParams& params);

/// Kolmogorov distance between the replicate laws of K_r and its second
/// chaos part K_{r,2} = (C₂/2) ∫ H₂(η). Both are normalized identically.
double reduction_check(const std::vector<GridField>& replicates, const Functional& G, const DomainSet& set,
                       double r);

/// Flat little-endian dump: int64 d, int64 n per axis (d entries), double h, values.
void write_snapshot(const GridField& field, const std::string& path);
GridField read_snapshot(const std::string& path);

}  // namespace lrd
