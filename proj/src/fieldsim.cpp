// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/fieldsim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <mutex>

#include "lrdlab/errors.hpp"
#include "lrdlab/rng.hpp"
#include "lrdlab/stats.hpp"

namespace lrd {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes a little-endian host");

namespace {

// the FFTW planner is not thread safe; execution is
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftBuffer {
 public:
  FftBuffer(int d, std::int64_t m) : size_(d == 1 ? m : m * m) {
    data_ = fftw_alloc_complex(size_);
    if (!data_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (d == 1)
      plan_ = fftw_plan_dft_1d(static_cast<int>(m), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
    else
      plan_ = fftw_plan_dft_2d(static_cast<int>(m), static_cast<int>(m), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~FftBuffer() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(data_);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
  void execute() { fftw_execute(plan_); }

 private:
  std::int64_t size_;
  fftw_complex* data_ = nullptr;
  fftw_plan plan_ = nullptr;
};

double bounding_half_width(const DomainSet& set, double r) {
  if (set.shape == Shape::ball) return set.R * r;
  double w = 0.0;
  for (std::size_t j = 0; j < set.a.size(); ++j) w = std::max({w, -set.a[j] * r, set.b[j] * r});
  return w;
}

}  // namespace

void SimulationPlan::validate() const {
  model.validate();
  if (d != 1 && d != 2) throw UnsupportedError("simulation supports d = 1 and d = 2");
  if (model.d != d) throw ParameterError("simulation plan: model dimension differs from plan dimension");
  if (!(h > 0.0) || !(extent > 0.0)) throw ParameterError("simulation plan: h and extent must be positive");
  if (!(padding >= 2.0)) throw ParameterError("simulation plan: padding must be >= 2");
  if (2.0 * std::ceil(extent / h) + 1.0 > 4194304.0)
    throw ParameterError("simulation plan: more than 2^22 points per axis");
}

std::int64_t SimulationPlan::points_per_axis() const {
  return 2 * static_cast<std::int64_t>(std::ceil(extent / h - 1e-12)) + 1;
}

std::int64_t SimulationPlan::torus_size() const {
  const double need = padding * static_cast<double>(points_per_axis() - 1);
  std::int64_t m = 8;
  while (static_cast<double>(m) < need) m *= 2;
  return m;
}

double required_extent(const DomainSet& set, double r, double h) { return bounding_half_width(set, r) + h; }

TorusSpectrum circulant_spectrum(const SimulationPlan& plan) {
  plan.validate();
  const std::int64_t m = plan.torus_size();
  const int d = plan.d;
  const std::int64_t total = d == 1 ? m : m * m;
  if (total > (std::int64_t{1} << 26)) throw ParameterError("circulant_spectrum: torus exceeds 2^26 points");
  FftBuffer buf(d, m);
  auto* c = buf.data();
  auto wrap = [m](std::int64_t j) { return static_cast<double>(std::min(j, m - j)); };
  if (d == 1) {
    for (std::int64_t j = 0; j < m; ++j) c[j] = covariance_eval(plan.model, plan.h * wrap(j));
  } else {
    for (std::int64_t j = 0; j < m; ++j)
      for (std::int64_t k = 0; k < m; ++k)
        c[j * m + k] = covariance_eval(plan.model, plan.h * std::hypot(wrap(j), wrap(k)));
  }
  buf.execute();

  TorusSpectrum s;
  s.d = d;
  s.m = m;
  s.amplitude.resize(total);
  s.min_eigenvalue = c[0].real();
  s.max_eigenvalue = c[0].real();
  for (std::int64_t i = 0; i < total; ++i) {
    s.min_eigenvalue = std::min(s.min_eigenvalue, c[i].real());
    s.max_eigenvalue = std::max(s.max_eigenvalue, c[i].real());
  }
  if (s.min_eigenvalue < -1e-8 * s.max_eigenvalue)
    throw EmbeddingError("circulant embedding is not nonnegative (min/max = " +
                         std::to_string(s.min_eigenvalue / s.max_eigenvalue) + "); enlarge the torus");
  for (std::int64_t i = 0; i < total; ++i) {
    double lam = c[i].real();
    if (lam < 0.0) {
      lam = 0.0;
      ++s.clamped;
    }
    s.amplitude[i] = std::sqrt(lam / static_cast<double>(total));
  }
  return s;
}

TorusSpectrum grow_embedding(SimulationPlan& plan, int max_doublings) {
  for (int k = 0;; ++k) {
    try {
      return circulant_spectrum(plan);
    } catch (const EmbeddingError&) {
      if (k >= max_doublings) throw;
      plan.padding *= 2.0;
    }
  }
}

GridField simulate_field(const SimulationPlan& plan) {
  const auto spectrum = circulant_spectrum(plan);
  auto eng = make_engine({plan.seed});
  return simulate_field(plan, spectrum, eng);
}

GridField simulate_field(const SimulationPlan& plan, const TorusSpectrum& spectrum, std::mt19937_64& eng) {
  const std::int64_t m = spectrum.m;
  const std::int64_t total = plan.d == 1 ? m : m * m;
  if (static_cast<std::int64_t>(spectrum.amplitude.size()) != total || spectrum.d != plan.d)
    throw ParameterError("simulate_field: spectrum does not match the plan");
  const std::int64_t n = plan.points_per_axis();
  if (n > m) throw ParameterError("simulate_field: torus smaller than the lattice");

  FftBuffer buf(plan.d, m);
  auto* z = buf.data();
  std::normal_distribution<double> gauss;
  for (std::int64_t i = 0; i < total; ++i) {
    const double re = gauss(eng);
    const double im = gauss(eng);
    z[i] = spectrum.amplitude[i] * std::complex<double>(re, im);
  }
  buf.execute();

  GridField f;
  f.d = plan.d;
  f.n = n;
  f.h = plan.h;
  f.origin = -static_cast<double>((n - 1) / 2) * plan.h;
  if (plan.d == 1) {
    f.values.resize(n);
    for (std::int64_t i = 0; i < n; ++i) f.values[i] = z[i].real();
  } else {
    f.values.resize(n * n);
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) f.values[i * n + j] = z[i * m + j].real();
  }
  return f;
}

std::vector<std::size_t> window_indices(const GridField& field, const DomainSet& set, double r) {
  if (set.d != field.d) throw ParameterError("window_indices: set dimension differs from field dimension");
  if (!(r > 0.0)) throw ParameterError("window_indices: r must be positive");
  const double lo = field.origin - 0.5 * field.h;
  const double hi = field.coordinate(field.n - 1) + 0.5 * field.h;
  if (set.shape == Shape::ball) {
    if (set.R * r > std::min(-lo, hi)) throw CoverageError("Δ(r) exceeds the simulated extent");
  } else {
    for (std::size_t j = 0; j < set.a.size(); ++j)
      if (set.a[j] * r < lo || set.b[j] * r > hi) throw CoverageError("Δ(r) exceeds the simulated extent");
  }
  std::vector<std::size_t> idx;
  if (field.d == 1) {
    for (std::int64_t i = 0; i < field.n; ++i) {
      const double x[] = {field.coordinate(i)};
      if (set.contains(x, r)) idx.push_back(static_cast<std::size_t>(i));
    }
  } else {
    for (std::int64_t i = 0; i < field.n; ++i)
      for (std::int64_t j = 0; j < field.n; ++j) {
        const double x[] = {field.coordinate(i), field.coordinate(j)};
        if (set.contains(x, r)) idx.push_back(static_cast<std::size_t>(i * field.n + j));
      }
  }
  return idx;
}

double functional_integral(const GridField& field, const Functional& G, const std::vector<std::size_t>& window) {
  std::vector<double> g(window.size());
  for (std::size_t k = 0; k < window.size(); ++k) g[k] = G(field.values[window[k]]);
  return pairwise_sum(g) * std::pow(field.h, field.d);
}

double functional_integral(const GridField& field, const Functional& G, const DomainSet& set, double r) {
  return functional_integral(field, G, window_indices(field, set, r));
}

double normalized_statistic(double kr, double C2, double r, const LongMemoryParams& params) {
  if (C2 == 0.0) throw RankError("normalized_statistic: C2 = 0, the functional is not of Hermite rank 2");
  if (!(r > 0.0)) throw ParameterError("normalized_statistic: r must be positive");
  return 2.0 * kr / (C2 * std::pow(r, params.d - params.alpha) * params.L(r));
}

double reduction_check(const std::vector<GridField>& replicates, const Functional& G, const DomainSet& set,
                       double r) {
  if (replicates.empty()) throw InputError("reduction_check: no replicates");
  const auto exp = hermite_coefficients(G, 2, 400);
  const double C2 = exp.coeffs[2];
  if (std::abs(C2) < 1e-8) throw RankError("reduction_check: C2 = 0");
  // KS is invariant under the common normalization, raw integrals suffice
  std::vector<double> full, second;
  full.reserve(replicates.size());
  second.reserve(replicates.size());
  const Functional chaos2 = [C2](double w) { return 0.5 * C2 * (w * w - 1.0); };
  for (const auto& f : replicates) {
    const auto idx = window_indices(f, set, r);
    full.push_back(functional_integral(f, G, idx));
    second.push_back(functional_integral(f, chaos2, idx));
  }
  return ks_distance(full, second);
}

void write_snapshot(const GridField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  const std::int64_t d = field.d;
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  for (int k = 0; k < field.d; ++k) out.write(reinterpret_cast<const char*>(&field.n), sizeof field.n);
  out.write(reinterpret_cast<const char*>(&field.h), sizeof field.h);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw InputError("write failed: " + path);
}

GridField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::int64_t d = 0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  if (!in || (d != 1 && d != 2)) throw InputError("bad snapshot header in " + path);
  GridField f;
  f.d = static_cast<int>(d);
  std::int64_t size = 1;
  for (int k = 0; k < f.d; ++k) {
    in.read(reinterpret_cast<char*>(&f.n), sizeof f.n);
    size *= f.n;
  }
  in.read(reinterpret_cast<char*>(&f.h), sizeof f.h);
  if (!in || f.n <= 0 || !(f.h > 0.0)) throw InputError("bad snapshot header in " + path);
  f.origin = -static_cast<double>((f.n - 1) / 2) * f.h;
  f.values.resize(size);
  in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(size * sizeof(double)));
  if (!in) throw InputError("truncated snapshot " + path);
  return f;
}

}  // namespace lrd
