// SPDX-License-Identifier: Apache-2.0
#pragma once

// The second-chaos limit law X₂(Δ) as a weighted sum of centred chi-squares,
// obtained from a Nyström discretization of its frequency-domain kernel.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lrdlab/geometry.hpp"

namespace lrd {

struct RosenblattKernel {
  int d = 1;
  double alpha = 0.0;
  std::vector<double> nodes;    // n × d, row-major, symmetric under λ → -λ
  std::vector<double> weights;  // n
  Eigen::MatrixXd matrix;       // c₂ √(w_i w_j) |λ_i|^{-a} |λ_j|^{-a} K_Δ(λ_i - λ_j), a = (d-α)/2

  std::size_t size() const { return weights.size(); }
};

/// n_nodes: nodes per half-axis (d=1) or per ray (d=2); cutoff: largest
/// frequency radius; angles: directions for d=2 (even).
RosenblattKernel build_kernel(const DomainSet& set, int d, double alpha, int n_nodes, double cutoff,
                              int angles = 24);

struct EigenSeries {
  std::vector<double> eigenvalues;  // decreasing |λ|
  std::size_t m = 0;
  double tail_mass = 0.0;           // Σ_{j>m} λ_j² / ‖M‖_F²
  double frobenius2 = 0.0;          // ‖M‖_F² before calibration
  double calibration = 1.0;         // factor applied to the eigenvalues
  double gaussian_tail = 0.0;       // variance of an added independent normal term

  double sum_squares() const;
};

/// Top-m eigenvalues of the kernel matrix by magnitude (m = 0: all).
EigenSeries eigen_series(const RosenblattKernel& kernel, std::size_t m = 0);
/// Same for an arbitrary symmetric matrix.
EigenSeries eigen_series(const Eigen::MatrixXd& matrix, std::size_t m = 0);

/// Smallest m whose top-m eigenvalues hold all but tail of the squared mass.
std::size_t truncation_for(const EigenSeries& full, double tail = 1e-3);
EigenSeries truncate(const EigenSeries& full, std::size_t m);

enum class Calibration { rescale, gaussian_tail };

/// Match 2Σλ² (+ tail variance) to the oracle. rescale multiplies the
/// eigenvalues and throws AccuracyError when the factor leaves [0.97, 1.03];
/// gaussian_tail adds the missing variance as a normal term and only reports
/// the factor.
EigenSeries calibrate(const EigenSeries& series, double oracle, Calibration mode = Calibration::rescale);

/// n draws of Σ λ_j (Z_j² - 1) (+ the normal tail), in blocks with their own
/// streams so the output does not depend on the number of workers.
std::vector<double> sample(const EigenSeries& series, std::size_t n, std::uint64_t seed, unsigned workers = 1);

/// 2^{p-1} (p-1)! Σ λ_j^p (p = 2 includes the normal tail).
double cumulant(const EigenSeries& series, int p);

/// 2 ∫_Δ∫_Δ ‖u - v‖^{-2α} du dv.
double variance_oracle(const DomainSet& set, double alpha, int d);

struct DensityTable {
  std::vector<double> grid;
  std::vector<double> density;
  double max = 0.0;
};

/// Gaussian kernel density estimate on a regular grid (linear binning).
DensityTable density_estimate(const std::vector<double>& samples, double bandwidth, std::size_t grid_points = 512);

std::string series_to_json(const EigenSeries& series);
EigenSeries series_from_json(const std::string& text);

}  // namespace lrd
