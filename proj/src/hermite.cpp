// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "lrdlab/errors.hpp"
#include "lrdlab/specfun.hpp"

namespace lrd {

namespace {

std::vector<double> coefficients_with(const Functional& G, int J, const GaussHermiteRule& rule) {
  std::vector<double> c(J + 1, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = rule.nodes[i];
    const double g = G(w) * rule.weights[i];
    double hm1 = 0.0, h = 1.0;
    for (int j = 0; j <= J; ++j) {
      c[j] += g * h;
      const double next = w * h - j * hm1;
      hm1 = h;
      h = next;
    }
  }
  return c;
}

}  // namespace

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw ParameterError("gauss_hermite: n must be positive");
  // nodes from the physicists' Jacobi matrix (off-diagonal √(k/2)); Newton on
  // the polynomial recurrence overflows beyond n ≈ 150
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("gauss_hermite: eigen-solver failed");
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()[i];
    // Christoffel weights 1/Σ p_k(x)² with orthonormal p_k, rescaled on the fly
    double pm1 = 0.0, p = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    double sum = p * p, log_scale = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * x * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
      pm1 = p;
      p = next;
      sum += p * p;
      if (sum > 1e200) {
        pm1 *= 1e-100;
        p *= 1e-100;
        sum *= 1e-200;
        log_scale += 200.0 * std::numbers::ln10;
      }
    }
    // divide by √π to get the weight for the standard normal density
    rule.nodes[i] = std::sqrt(2.0) * x;
    rule.weights[i] = std::exp(-log_scale - std::log(sum)) / std::sqrt(std::numbers::pi);
  }
  // exact symmetry
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

HermiteExpansion hermite_coefficients(const Functional& G, int J, int quad_order, double stability_tol) {
  if (J < 0) throw ParameterError("hermite_coefficients: J must be >= 0");
  if (quad_order < 2 * J || quad_order < 2) throw ParameterError("hermite_coefficients: quad_order must be >= 2J");
  HermiteExpansion e;
  e.order = J;
  e.quad_order = quad_order;
  e.coeffs = coefficients_with(G, J, gauss_hermite(quad_order));
  const auto check = coefficients_with(G, J, gauss_hermite(quad_order + quad_order / 2));
  double scale = 0.0, diff = 0.0;
  for (int j = 0; j <= J; ++j) {
    scale = std::max(scale, std::abs(e.coeffs[j]));
    diff = std::max(diff, std::abs(e.coeffs[j] - check[j]));
  }
  if (diff > stability_tol * std::max(scale, 1e-300))
    throw AccuracyError("hermite_coefficients: coefficients unstable under quadrature refinement");
  double cmax = 0.0;
  for (int j = 0; j <= J; ++j) cmax = std::max(cmax, std::abs(e.coeffs[j]));
  for (int j = 1; j <= J; ++j)
    if (std::abs(e.coeffs[j]) > 1e-8 * cmax) {
      e.rank = j;
      break;
    }
  return e;
}

int hermite_rank(const HermiteExpansion& exp, double tol) {
  if (tol < 0.0) {
    double cmax = 0.0;
    for (double c : exp.coeffs) cmax = std::max(cmax, std::abs(c));
    tol = 1e-8 * cmax;
  }
  for (int j = 1; j <= exp.order; ++j)
    if (std::abs(exp.coeffs[j]) > tol) return j;
  throw RankError("hermite_rank: no coefficient above tolerance for 1 <= j <= J");
}

double parseval_defect(const Functional& G, const HermiteExpansion& exp) {
  const auto rule = gauss_hermite(exp.quad_order);
  double second = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double g = G(rule.nodes[i]);
    second += rule.weights[i] * g * g;
  }
  double sum = 0.0, fact = 1.0;
  for (int j = 0; j <= exp.order; ++j) {
    if (j > 0) fact *= j;
    sum += exp.coeffs[j] * exp.coeffs[j] / fact;
  }
  return second - sum;
}

double truncated_eval(const HermiteExpansion& exp, double w) {
  double s = 0.0, fact = 1.0;
  for (int j = 0; j <= exp.order; ++j) {
    if (j > 0) fact *= j;
    s += exp.coeffs[j] * specfun::hermite_poly(j, w) / fact;
  }
  return s;
}

Functional functional_by_name(const std::string& name) {
  if (name == "h2") return [](double w) { return w * w - 1.0; };
  if (name == "square") return [](double w) { return w * w; };
  if (name == "abs-centered") {
    const double m = std::sqrt(2.0 / std::numbers::pi);
    return [m](double w) { return std::abs(w) - m; };
  }
  if (name == "identity") return [](double w) { return w; };
  throw InputError("unknown functional '" + name + "'");
}

std::vector<std::string> functional_names() { return {"h2", "square", "abs-centered", "identity"}; }

}  // namespace lrd
