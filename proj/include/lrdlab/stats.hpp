// SPDX-License-Identifier: Apache-2.0
#pragma once

// Small sample statistics shared by the simulators and experiments.

#include <span>

namespace lrd {

/// Two-sample Kolmogorov distance sup_z |F_a(z) - F_b(z)| between empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);
/// Same for inputs already sorted ascending (no copies).
double ks_distance_sorted(std::span<const double> a, std::span<const double> b);

/// Pairwise (cascade) summation; result does not depend on how the input was produced.
double pairwise_sum(std::span<const double> x);

double sample_mean(std::span<const double> x);
/// Unbiased sample variance.
double sample_variance(std::span<const double> x);
/// Biased standardized moment E[(X - m)^p] / s^p.
double standardized_moment(std::span<const double> x, int p);

}  // namespace lrd
