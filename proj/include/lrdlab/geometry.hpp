// SPDX-License-Identifier: Apache-2.0
#pragma once

// Convex observation windows containing the origin: balls and rectangles,
// their homotheties Δ(r), indicator Fourier transforms and the law of the
// distance between two independent uniform points.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lrd {

enum class Shape { ball, rect };

struct DomainSet {
  Shape shape = Shape::ball;
  int d = 1;
  double R = 1.0;              // ball radius
  std::vector<double> a, b;    // rectangle corners, a_j < 0 < b_j

  static DomainSet ball(double R, int d);
  static DomainSet rect(std::vector<double> a, std::vector<double> b);

  void validate() const;
  bool origin_symmetric() const;
  /// Membership of x in Δ(r).
  bool contains(std::span<const double> x, double r) const;
  std::string describe() const;
};

double volume(const DomainSet& set, double r = 1.0);
double diameter(const DomainSet& set, double r = 1.0);

/// ∫_Δ e^{i(x,u)} du.
std::complex<double> indicator_ft(const DomainSet& set, std::span<const double> x);

/// Density of ‖U - V‖ for U, V independent and uniform in Δ(r).
double distance_pdf(const DomainSet& set, double r, double z);

/// n points uniform in Δ(r), row-major (n × d).
std::vector<double> uniform_sample(const DomainSet& set, double r, std::size_t n, std::uint64_t seed);

struct DistanceHistogram {
  std::vector<double> edges;    // bins + 1 entries
  std::vector<double> density;  // per bin
  std::vector<double> stderr_;  // binomial standard error of the density per bin
};

/// Monte Carlo histogram of pairwise distances in Δ(r).
DistanceHistogram distance_histogram(const DomainSet& set, double r, std::size_t pairs, std::size_t bins,
                                     std::uint64_t seed);

/// ∫_{Δ(r)}∫_{Δ(r)} ϒ(‖x - y‖) dx dy. ϒ may be integrably singular at 0;
/// throws IntegrabilityError when the contribution near 0 fails to decay.
double distance_integral(const DomainSet& set, double r, const std::function<double(double)>& upsilon);

}  // namespace lrd
