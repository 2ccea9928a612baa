// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/rosenblatt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "lrdlab/covmodels.hpp"
#include "lrdlab/errors.hpp"
#include "lrdlab/parallel.hpp"
#include "lrdlab/quadrature.hpp"
#include "lrdlab/rng.hpp"

namespace lrd {

namespace {

constexpr std::size_t kSampleBlock = 4096;

struct RadialRule {
  std::vector<double> nodes, weights;  // on (0, cutoff], weights for dλ
};

// Graded Gauss-Legendre nodes on (0, λ₀] through λ = λ₀ t^{1/α}, which makes
// λ^{α-1} dλ smooth in t, followed by 4-point panels of width ≈ 2 up to the cutoff.
RadialRule radial_rule(double alpha, int n_nodes, double cutoff) {
  const double lam0 = std::min(2.0, 0.5 * cutoff);
  const int inner = std::max(8, std::min(48, n_nodes / 32 + 16));
  const int panels = std::max(1, (n_nodes - inner) / 4);
  RadialRule rr;
  const auto gl_in = quad::gauss_legendre(static_cast<std::size_t>(inner));
  const double p = 1.0 / alpha;
  for (std::size_t k = 0; k < gl_in.nodes.size(); ++k) {
    const double t = 0.5 * (gl_in.nodes[k] + 1.0);
    rr.nodes.push_back(lam0 * std::pow(t, p));
    rr.weights.push_back(0.5 * gl_in.weights[k] * lam0 * p * std::pow(t, p - 1.0));
  }
  const auto gl4 = quad::gauss_legendre(4);
  const double width = (cutoff - lam0) / panels;
  for (int q = 0; q < panels; ++q) {
    const double a = lam0 + q * width;
    for (std::size_t k = 0; k < 4; ++k) {
      rr.nodes.push_back(a + 0.5 * width * (gl4.nodes[k] + 1.0));
      rr.weights.push_back(0.5 * width * gl4.weights[k]);
    }
  }
  return rr;
}

}  // namespace

RosenblattKernel build_kernel(const DomainSet& set, int d, double alpha, int n_nodes, double cutoff, int angles) {
  set.validate();
  if (set.d != d) throw ParameterError("build_kernel: set dimension differs from d");
  if (!(alpha > 0.0) || !(alpha < 0.5 * d)) throw DomainError("build_kernel: alpha must lie in (0, d/2)");
  if (!set.origin_symmetric()) throw UnsupportedError("build_kernel: the window must be origin-symmetric");
  if (d > 2) throw UnsupportedError("build_kernel: d <= 2 only");
  if (n_nodes < 16 || !(cutoff > 1.0)) throw ParameterError("build_kernel: need n_nodes >= 16 and cutoff > 1");
  if (d == 2 && (angles < 4 || angles % 2 != 0)) throw ParameterError("build_kernel: angles must be even and >= 4");

  const auto rr = radial_rule(alpha, n_nodes, cutoff);
  RosenblattKernel k;
  k.d = d;
  k.alpha = alpha;
  const double a = 0.5 * (d - alpha);
  std::vector<double> scale;  // √w |λ|^{-a}
  if (d == 1) {
    for (int sgn : {-1, 1})
      for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
        const std::size_t j = sgn < 0 ? rr.nodes.size() - 1 - i : i;
        k.nodes.push_back(sgn * rr.nodes[j]);
        k.weights.push_back(rr.weights[j]);
      }
  } else {
    const double dt = 2.0 * std::numbers::pi / angles;
    for (int q = 0; q < angles; ++q) {
      const double t = (q + 0.5) * dt;
      for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
        k.nodes.push_back(rr.nodes[i] * std::cos(t));
        k.nodes.push_back(rr.nodes[i] * std::sin(t));
        k.weights.push_back(rr.weights[i] * rr.nodes[i] * dt);
      }
    }
  }
  const std::size_t n = k.weights.size();
  scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) r2 += k.nodes[i * d + c] * k.nodes[i * d + c];
    scale[i] = std::sqrt(k.weights[i]) * std::pow(r2, -0.5 * a);
  }
  const double c2 = c2_constant(d, alpha);
  k.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double diff[2];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      for (int c = 0; c < d; ++c) diff[c] = k.nodes[i * d + c] - k.nodes[j * d + c];
      const double v = c2 * scale[i] * scale[j] * indicator_ft(set, std::span<const double>(diff, d)).real();
      k.matrix(i, j) = v;
      k.matrix(j, i) = v;
    }
  return k;
}

double EigenSeries::sum_squares() const {
  double s = 0.0;
  for (double l : eigenvalues) s += l * l;
  return s;
}

EigenSeries eigen_series(const Eigen::MatrixXd& matrix, std::size_t m) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw InputError("eigen_series: need a square matrix");
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (m > n) throw ParameterError("eigen_series: m exceeds the matrix size");
  if (m == 0) m = n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigen_series: eigen-solver did not converge");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::stable_sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  EigenSeries s;
  s.frobenius2 = matrix.squaredNorm();
  double kept = 0.0;
  for (std::size_t j = 0; j < m; ++j) kept += ev[j] * ev[j];
  s.tail_mass = std::max(0.0, 1.0 - kept / s.frobenius2);
  ev.resize(m);
  s.eigenvalues = std::move(ev);
  s.m = m;
  return s;
}

EigenSeries eigen_series(const RosenblattKernel& kernel, std::size_t m) { return eigen_series(kernel.matrix, m); }

std::size_t truncation_for(const EigenSeries& full, double tail) {
  const double total = full.sum_squares();
  double kept = 0.0;
  for (std::size_t j = 0; j < full.eigenvalues.size(); ++j) {
    kept += full.eigenvalues[j] * full.eigenvalues[j];
    if (kept >= (1.0 - tail) * total) return j + 1;
  }
  return full.eigenvalues.size();
}

EigenSeries truncate(const EigenSeries& full, std::size_t m) {
  if (m == 0 || m > full.eigenvalues.size()) throw ParameterError("truncate: bad m");
  EigenSeries s = full;
  s.eigenvalues.resize(m);
  s.m = m;
  s.tail_mass = std::max(0.0, 1.0 - s.sum_squares() * (1.0 - full.tail_mass) / full.sum_squares());
  return s;
}

EigenSeries calibrate(const EigenSeries& series, double oracle, Calibration mode) {
  if (!(oracle > 0.0)) throw ParameterError("calibrate: oracle variance must be positive");
  const double current = 2.0 * series.sum_squares();
  EigenSeries s = series;
  const double factor = std::sqrt(oracle / current);
  s.calibration = factor;
  if (mode == Calibration::rescale) {
    if (factor < 0.97 || factor > 1.03)
      throw AccuracyError("calibrate: rescale factor " + std::to_string(factor) + " outside [0.97, 1.03]");
    for (double& l : s.eigenvalues) l *= factor;
    s.gaussian_tail = 0.0;
  } else {
    s.gaussian_tail = std::max(0.0, oracle - current);
  }
  return s;
}

std::vector<double> sample(const EigenSeries& series, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw ParameterError("sample: n must be >= 1");
  std::vector<double> out(n);
  const std::size_t blocks = (n + kSampleBlock - 1) / kSampleBlock;
  const double tail_sd = std::sqrt(series.gaussian_tail);
  parallel_for(blocks, workers, [&](std::size_t b) {
    auto eng = make_engine({seed, b});
    std::normal_distribution<double> g;
    const std::size_t end = std::min(n, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      double x = 0.0;
      for (double l : series.eigenvalues) {
        const double z = g(eng);
        x += l * (z * z - 1.0);
      }
      if (tail_sd > 0.0) x += tail_sd * g(eng);
      out[i] = x;
    }
  });
  return out;
}

double cumulant(const EigenSeries& series, int p) {
  if (p < 2) throw ParameterError("cumulant: p must be >= 2");
  double s = 0.0;
  for (double l : series.eigenvalues) s += std::pow(l, p);
  const double f = std::pow(2.0, p - 1) * std::tgamma(static_cast<double>(p));
  return f * s + (p == 2 ? series.gaussian_tail : 0.0);
}

double variance_oracle(const DomainSet& set, double alpha, int d) {
  if (set.d != d) throw ParameterError("variance_oracle: set dimension differs from d");
  if (!(alpha >= 0.0)) throw DomainError("variance_oracle: alpha must be nonnegative");
  if (alpha >= 0.5 * d) throw IntegrabilityError("variance_oracle: the double integral diverges for alpha >= d/2");
  return 2.0 * distance_integral(set, 1.0, [alpha](double z) { return std::pow(z, -2.0 * alpha); });
}

DensityTable density_estimate(const std::vector<double>& samples, double bandwidth, std::size_t grid_points) {
  if (samples.size() < 10000) throw InputError("density_estimate: need at least 10^4 samples");
  if (!(bandwidth > 0.0)) throw ParameterError("density_estimate: bandwidth must be positive");
  if (grid_points < 16) throw ParameterError("density_estimate: grid too small");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - 5.0 * bandwidth, hi = *hi_it + 5.0 * bandwidth;
  const double dx = (hi - lo) / (grid_points - 1);
  // linear binning onto the grid, then a discrete Gaussian convolution
  std::vector<double> bins(grid_points, 0.0);
  for (double x : samples) {
    const double pos = (x - lo) / dx;
    const auto i = std::min(static_cast<std::size_t>(pos), grid_points - 2);
    const double frac = pos - static_cast<double>(i);
    bins[i] += 1.0 - frac;
    bins[i + 1] += frac;
  }
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(5.0 * bandwidth / dx));
  std::vector<double> kern(2 * reach + 1);
  const double norm = 1.0 / (samples.size() * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
    const double u = k * dx / bandwidth;
    kern[k + reach] = norm * std::exp(-0.5 * u * u);
  }
  DensityTable t;
  t.grid.resize(grid_points);
  t.density.assign(grid_points, 0.0);
  const auto G = static_cast<std::ptrdiff_t>(grid_points);
  for (std::ptrdiff_t i = 0; i < G; ++i) {
    t.grid[i] = lo + i * dx;
    if (bins[i] == 0.0) continue;
    for (std::ptrdiff_t k = std::max(-reach, -i); k <= std::min(reach, G - 1 - i); ++k)
      t.density[i + k] += bins[i] * kern[k + reach];
  }
  t.max = *std::max_element(t.density.begin(), t.density.end());
  return t;
}

std::string series_to_json(const EigenSeries& series) {
  nlohmann::json j;
  j["eigenvalues"] = series.eigenvalues;
  j["tail_mass"] = series.tail_mass;
  j["frobenius2"] = series.frobenius2;
  j["calibration"] = series.calibration;
  j["gaussian_tail"] = series.gaussian_tail;
  return j.dump();
}

EigenSeries series_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("series_from_json: ") + e.what());
  }
  EigenSeries s;
  try {
    // a bare array of eigenvalues is accepted too
    if (j.is_array()) {
      s.eigenvalues = j.get<std::vector<double>>();
    } else {
      s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
      s.tail_mass = j.value("tail_mass", 0.0);
      s.frobenius2 = j.value("frobenius2", 0.0);
      s.calibration = j.value("calibration", 1.0);
      s.gaussian_tail = j.value("gaussian_tail", 0.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("series_from_json: ") + e.what());
  }
  s.m = s.eigenvalues.size();
  if (s.frobenius2 == 0.0) s.frobenius2 = s.sum_squares();
  return s;
}

}  // namespace lrd
