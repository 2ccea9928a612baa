// SPDX-License-Identifier: Apache-2.0
#pragma once

// Adaptive quadrature shared by the special-function, model and geometry
// modules. Gauss-Kronrod (7,15) with a global error heap for smooth or
// mildly oscillatory integrands, double-exponential (tanh-sinh) for
// integrable endpoint singularities.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "lrdlab/errors.hpp"

namespace lrd::quad {

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Rule gauss_legendre(std::size_t n);

namespace detail {

// Kronrod abscissae / weights for the (7,15) pair, from QUADPACK qk15.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double err = std::abs((resk - resg) * h);
  return {a, b, resk * h, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod over [a, b] split first at the given interior breakpoints.
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
  Result out;
  if (points.size() < 2) return out;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] == points[i]) continue;
    auto s = detail::gk15(f, points[i], points[i + 1]);
    out.evaluations += 15;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (heap.size() >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    auto s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) {
      // interval exhausted at machine resolution
      out.converged = false;
      heap.push(s);
      break;
    }
    auto l = detail::gk15(f, s.a, mid);
    auto r = detail::gk15(f, mid, s.b);
    out.evaluations += 30;
    total += l.value + r.value - s.value;
    total_err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
  }
  // re-sum from the leaves to shed accumulated update rounding
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(f, std::span<const double>(pts), opt);
}

/// Tanh-sinh quadrature on [a, b]; tolerates integrable algebraic or
/// logarithmic singularities at either endpoint. The integrand receives
/// x together with the distances (x - a) and (b - x), computed without
/// cancellation, so it can evaluate singular factors accurately.
template <class F>
Result tanh_sinh(F&& f, double a, double b, const Options& opt = {}) {
  Result out;
  const double half = 0.5 * (b - a);
  constexpr double kPi2 = 1.57079632679489661923;
  double h = 1.0;
  const double tmax = 6.5;
  auto term = [&](double t) {
    const double u = kPi2 * std::sinh(t);
    const double ch = std::cosh(u);
    // 1 - tanh(u) evaluated stably for the distance to the endpoint
    const double e = std::exp(-2.0 * std::abs(u));
    const double dist = half * 2.0 * e / (1.0 + e);  // half * (1 - |tanh u|)
    const double w = half * kPi2 * std::cosh(t) / (ch * ch);
    if (dist <= 0.0 || w == 0.0) return 0.0;
    double x, da, db;
    if (u < 0) {
      da = dist;
      db = (b - a) - dist;
      x = a + dist;
    } else {
      db = dist;
      da = (b - a) - dist;
      x = b - dist;
    }
    ++out.evaluations;
    return w * f(x, da, db);
  };
  double sum = term(0.0);
  for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
  double prev = sum * h;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= tmax; t += 2.0 * h) add += term(t) + term(-t);
    sum += add;
    const double cur = sum * h;
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (level >= 3 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
      out.value = cur;
      out.error = diff;
      return out;
    }
  }
  out.value = prev;
  out.error = std::numeric_limits<double>::quiet_NaN();
  out.converged = false;
  return out;
}

/// Geometric breakpoints a, a*q, a*q^2, ... up to b (a > 0).
std::vector<double> geometric_points(double a, double b, double ratio);

}  // namespace lrd::quad
