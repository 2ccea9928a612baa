// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/quadrature.hpp"

#include <numbers>

namespace lrd::quad {

Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw ParameterError("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jj = static_cast<double>(j);
        p1 = ((2.0 * jj - 1.0) * z * p2 - (jj - 1.0) * p3) / jj;
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

std::vector<double> geometric_points(double a, double b, double ratio) {
  if (!(a > 0.0) || !(b > a) || !(ratio > 1.0))
    throw ParameterError("geometric_points: need 0 < a < b and ratio > 1");
  std::vector<double> pts{a};
  double x = a;
  while (x * ratio < b) {
    x *= ratio;
    pts.push_back(x);
  }
  pts.push_back(b);
  return pts;
}

}  // namespace lrd::quad
