// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrdlab/errors.hpp"

namespace lrd {

double ks_distance_sorted(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw InputError("ks_distance: empty sample");
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double z = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == z) ++i;
    while (j < y.size() && y[j] == z) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  // once one sample is exhausted the gap only shrinks
  return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("ks_distance: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return ks_distance_sorted(x, y);
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 16) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw InputError("sample_mean: empty sample");
  return pairwise_sum(x) / x.size();
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InputError("sample_variance: need at least two values");
  const double m = sample_mean(x);
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - m) * (x[i] - m);
  return pairwise_sum(sq) / (x.size() - 1);
}

double standardized_moment(std::span<const double> x, int p) {
  const double m = sample_mean(x);
  std::vector<double> c2(x.size()), cp(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    c2[i] = (x[i] - m) * (x[i] - m);
    cp[i] = std::pow(x[i] - m, p);
  }
  const double v = pairwise_sum(c2) / x.size();
  return pairwise_sum(cp) / x.size() / std::pow(v, 0.5 * p);
}

}  // namespace lrd
