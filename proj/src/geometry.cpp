// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lrdlab/errors.hpp"
#include "lrdlab/quadrature.hpp"
#include "lrdlab/rng.hpp"
#include "lrdlab/specfun.hpp"

namespace lrd {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::vector<double> side_lengths(const DomainSet& s) {
  std::vector<double> L(s.d);
  for (int j = 0; j < s.d; ++j) L[j] = s.b[j] - s.a[j];
  return L;
}

quad::Options pdf_options() {
  quad::Options o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-12;
  return o;
}

// Distance density for a box with sides L, via the angular integral of the
// density of U - V, Π (L_j - |x_j|)₊ / L_j².
double rect_pdf_unit(const std::vector<double>& L, double z) {
  const int d = static_cast<int>(L.size());
  double diam2 = 0.0;
  for (double l : L) diam2 += l * l;
  if (z < 0.0 || z >= std::sqrt(diam2)) return 0.0;
  if (d == 1) return 2.0 * (L[0] - z) / (L[0] * L[0]);
  if (d == 2) {
    const double lo = z > L[0] ? std::acos(L[0] / z) : 0.0;
    const double hi = z > L[1] ? std::asin(L[1] / z) : 0.5 * kPi;
    if (lo >= hi) return 0.0;
    auto res = quad::integrate(
        [&](double phi) {
          return std::max(0.0, L[0] - z * std::cos(phi)) * std::max(0.0, L[1] - z * std::sin(phi));
        },
        lo, hi, pdf_options());
    return 4.0 * z * res.value / (L[0] * L[0] * L[1] * L[1]);
  }
  if (d == 3) {
    const double th3 = z > L[2] ? std::acos(L[2] / z) : 0.0;
    auto inner = [&](double phi) {
      const double c = std::cos(phi), s = std::sin(phi);
      double hi = 0.5 * kPi;
      if (z * c > L[0]) hi = std::min(hi, std::asin(L[0] / (z * c)));
      if (z * s > L[1]) hi = std::min(hi, std::asin(L[1] / (z * s)));
      if (th3 >= hi) return 0.0;
      auto res = quad::integrate(
          [&](double th) {
            const double st = std::sin(th);
            return st * std::max(0.0, L[0] - z * st * c) * std::max(0.0, L[1] - z * st * s) *
                   std::max(0.0, L[2] - z * std::cos(th));
          },
          th3, hi, pdf_options());
      return res.value;
    };
    // kinks of the outer integrand
    std::vector<double> pts{0.0, 0.5 * kPi};
    if (z > L[0]) pts.push_back(std::acos(L[0] / z));
    if (z > L[1]) pts.push_back(std::asin(L[1] / z));
    if (z > L[2]) {
      const double w = std::sqrt(z * z - L[2] * L[2]);
      if (L[0] < w) pts.push_back(std::acos(L[0] / w));
      if (L[1] < w) pts.push_back(std::asin(L[1] / w));
    }
    std::sort(pts.begin(), pts.end());
    auto res = quad::integrate(inner, std::span<const double>(pts), pdf_options());
    return 8.0 * z * z * res.value / (L[0] * L[0] * L[1] * L[1] * L[2] * L[2]);
  }
  throw UnsupportedError("distance_pdf: rectangles supported for d <= 3");
}

// Points in (0, diam) where the distance density is not smooth.
std::vector<double> pdf_kinks(const DomainSet& set, double r) {
  std::vector<double> k;
  if (set.shape == Shape::ball) return k;
  const auto L = side_lengths(set);
  for (int i = 0; i < set.d; ++i) {
    k.push_back(r * L[i]);
    for (int j = i + 1; j < set.d; ++j) k.push_back(r * std::hypot(L[i], L[j]));
  }
  const double diam = diameter(set, r);
  std::erase_if(k, [&](double z) { return z >= diam * (1 - 1e-12); });
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

}  // namespace

DomainSet DomainSet::ball(double R, int d) {
  DomainSet s;
  s.shape = Shape::ball;
  s.R = R;
  s.d = d;
  s.validate();
  return s;
}

DomainSet DomainSet::rect(std::vector<double> a, std::vector<double> b) {
  DomainSet s;
  s.shape = Shape::rect;
  s.d = static_cast<int>(a.size());
  s.a = std::move(a);
  s.b = std::move(b);
  s.validate();
  return s;
}

void DomainSet::validate() const {
  if (d < 1) throw ParameterError("domain: dimension must be >= 1");
  if (shape == Shape::ball) {
    if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("domain: ball radius must be positive");
    return;
  }
  if (a.size() != b.size() || static_cast<int>(a.size()) != d)
    throw ParameterError("domain: rectangle corners must both have d entries");
  for (int j = 0; j < d; ++j)
    if (!(a[j] < 0.0 && 0.0 < b[j]) || !std::isfinite(a[j]) || !std::isfinite(b[j]))
      throw ParameterError("domain: rectangle needs a_j < 0 < b_j");
}

bool DomainSet::origin_symmetric() const {
  if (shape == Shape::ball) return true;
  for (int j = 0; j < d; ++j)
    if (a[j] != -b[j]) return false;
  return true;
}

bool DomainSet::contains(std::span<const double> x, double r) const {
  if (static_cast<int>(x.size()) != d) throw InputError("contains: point dimension mismatch");
  if (shape == Shape::ball) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s <= R * R * r * r;
  }
  for (int j = 0; j < d; ++j)
    if (x[j] < r * a[j] || x[j] > r * b[j]) return false;
  return true;
}

std::string DomainSet::describe() const {
  std::ostringstream os;
  if (shape == Shape::ball) {
    os << "ball(R=" << R << ", d=" << d << ")";
  } else {
    os << "rect(";
    for (int j = 0; j < d; ++j) os << (j ? " x " : "") << "[" << a[j] << ", " << b[j] << "]";
    os << ")";
  }
  return os.str();
}

double volume(const DomainSet& set, double r) {
  set.validate();
  if (!(r > 0.0)) throw DomainError("volume: r must be positive");
  double v;
  if (set.shape == Shape::ball) {
    v = std::pow(kPi, 0.5 * set.d) * std::pow(set.R, set.d) / specfun::gamma_fn(0.5 * set.d + 1.0);
  } else {
    v = 1.0;
    for (int j = 0; j < set.d; ++j) v *= set.b[j] - set.a[j];
  }
  return std::pow(r, set.d) * v;
}

double diameter(const DomainSet& set, double r) {
  set.validate();
  if (!(r > 0.0)) throw DomainError("diameter: r must be positive");
  if (set.shape == Shape::ball) return 2.0 * set.R * r;
  double s = 0.0;
  for (int j = 0; j < set.d; ++j) s += (set.b[j] - set.a[j]) * (set.b[j] - set.a[j]);
  return r * std::sqrt(s);
}

std::complex<double> indicator_ft(const DomainSet& set, std::span<const double> x) {
  set.validate();
  if (static_cast<int>(x.size()) != set.d) throw InputError("indicator_ft: point dimension mismatch");
  if (set.shape == Shape::ball) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    // (2π)^{d/2} R^d J_{d/2}(R‖x‖)/(R‖x‖)^{d/2} = |Δ| Γ(d/2+1) (2/z)^{d/2} J_{d/2}(z)
    return {volume(set) * specfun::y_d_kernel(set.d + 2, set.R * std::sqrt(n2)), 0.0};
  }
  std::complex<double> k{1.0, 0.0};
  for (int j = 0; j < set.d; ++j) {
    // (e^{i b x} - e^{i a x})/(i x) = L e^{i c x} sinc(L x / 2)
    const double L = set.b[j] - set.a[j];
    const double c = 0.5 * (set.a[j] + set.b[j]);
    k *= std::polar(L * sinc(0.5 * L * x[j]), c * x[j]);
  }
  return k;
}

double distance_pdf(const DomainSet& set, double r, double z) {
  set.validate();
  if (!(r > 0.0)) throw DomainError("distance_pdf: r must be positive");
  if (!(z >= 0.0) || z >= diameter(set, r)) return 0.0;
  if (set.shape == Shape::ball) {
    const double rho = set.R * r;
    const double ratio = z / (2.0 * rho);
    const double d = set.d;
    const double tail = ratio * ratio;
    return d * std::pow(rho, -d) * std::pow(z, d - 1) *
           specfun::incomplete_beta(1.0 - tail, tail, 0.5 * (d + 1), 0.5);
  }
  return rect_pdf_unit(side_lengths(set), z / r) / r;
}

std::vector<double> uniform_sample(const DomainSet& set, double r, std::size_t n, std::uint64_t seed) {
  set.validate();
  if (n == 0) throw InputError("uniform_sample: n must be >= 1");
  if (!(r > 0.0)) throw DomainError("uniform_sample: r must be positive");
  auto eng = make_engine({seed});
  const std::size_t d = set.d;
  std::vector<double> out(n * d);
  if (set.shape == Shape::rect) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        std::uniform_real_distribution<double> u(r * set.a[j], r * set.b[j]);
        out[i * d + j] = u(eng);
      }
    return out;
  }
  const double rho = set.R * r;
  std::uniform_real_distribution<double> u(-rho, rho);
  std::vector<double> p(d);
  for (std::size_t i = 0; i < n;) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      p[j] = u(eng);
      s += p[j] * p[j];
    }
    if (s > rho * rho) continue;
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(i * d));
    ++i;
  }
  return out;
}

DistanceHistogram distance_histogram(const DomainSet& set, double r, std::size_t pairs, std::size_t bins,
                                     std::uint64_t seed) {
  if (pairs == 0 || bins == 0) throw InputError("distance_histogram: pairs and bins must be positive");
  const std::size_t d = set.d;
  const auto pts = uniform_sample(set, r, 2 * pairs, seed);
  const double diam = diameter(set, r);
  const double width = diam / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < pairs; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double dx = pts[2 * i * d + j] - pts[(2 * i + 1) * d + j];
      s += dx * dx;
    }
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(std::sqrt(s) / width));
    ++counts[bin];
  }
  DistanceHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = width * static_cast<double>(k);
  const double np = static_cast<double>(pairs);
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = static_cast<double>(counts[k]) / np;
    h.density.push_back(p / width);
    h.stderr_.push_back(std::sqrt(p * (1.0 - p) / np) / width);
  }
  return h;
}

double distance_integral(const DomainSet& set, double r, const std::function<double(double)>& upsilon) {
  set.validate();
  if (!(r > 0.0)) throw DomainError("distance_integral: r must be positive");
  const double diam = diameter(set, r);
  const auto kinks = pdf_kinks(set, r);
  const double z1 = 0.5 * (kinks.empty() ? diam : kinks.front());
  auto integrand = [&](double z) { return upsilon(z) * distance_pdf(set, r, z); };

  // blocks of three decades towards 0; their ratio measures the local power law,
  // which both flags divergence and sums the remaining geometric tail
  quad::Options qo;
  qo.abs_tol = 0.0;
  qo.rel_tol = 1e-12;
  qo.max_intervals = 20000;
  double head = 0.0, prev = 0.0, last = 0.0;
  bool converged = true;
  for (int k = 0; k < 6; ++k) {
    const double hi = z1 * std::pow(10.0, -3.0 * k);
    auto pts = quad::geometric_points(hi * 1e-3, hi, 10.0);
    auto res = quad::integrate(integrand, std::span<const double>(pts), qo);
    converged = converged && res.converged;
    prev = last;
    last = res.value;
    head += last;
  }
  const double ratio = prev != 0.0 ? last / prev : 0.0;
  if (ratio >= 0.999) throw IntegrabilityError("distance_integral: integrand is not integrable at z = 0");
  if (ratio > 0.0) head += last * ratio / (1.0 - ratio);

  std::vector<double> pts{z1};
  for (double k : kinks)
    if (k > z1) pts.push_back(k);
  pts.push_back(diam);
  quad::Options body_opt;
  body_opt.abs_tol = 1e-15;
  body_opt.rel_tol = 1e-12;
  auto body = quad::integrate(integrand, std::span<const double>(pts), body_opt);
  if (!converged || !body.converged) throw AccuracyError("distance_integral: quadrature did not converge");
  const double v = volume(set, r);
  return v * v * (head + body.value);
}

}  // namespace lrd
