// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "lrdlab/errors.hpp"
#include "lrdlab/fieldsim.hpp"
#include "lrdlab/hermite.hpp"
#include "lrdlab/parallel.hpp"
#include "lrdlab/ratelab.hpp"
#include "lrdlab/rng.hpp"

namespace lrd {

namespace {

constexpr std::uint64_t kReferenceStream = 0x5245464552454e43ull;
constexpr std::uint64_t kBootstrapStream = 0x424f4f5453545250ull;

double rank2_coefficient(const ExperimentConfig& config) {
  const auto G = functional_by_name(config.functional);
  const auto exp = hermite_coefficients(G, 4, config.hermite_quad_order);
  int rank = 0;
  try {
    rank = hermite_rank(exp);
  } catch (const RankError&) {
    throw RankError("functional '" + config.functional + "' has no nonzero Hermite coefficient up to order 4");
  }
  if (rank != 2)
    throw RankError("functional '" + config.functional + "' has Hermite rank " + std::to_string(rank) + ", need 2");
  return exp.coeffs[2];
}

double resolved_q(const ExperimentConfig& config, const LongMemoryParams& params) {
  return config.q > 0.0 ? config.q : 0.999 * params.q_max;
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  set.validate();
  if (model.d != set.d) throw ParameterError("experiment: model and window dimensions differ");
  if (r_grid.empty()) throw ParameterError("experiment: empty r grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw ParameterError("experiment: r values must be positive");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw ParameterError("experiment: r grid must be increasing");
  }
  if (replicates < 1000) throw ParameterError("experiment: at least 1000 replicates per r");
  if (reference_size < 1000) throw ParameterError("experiment: reference sample too small");
  if (!(h > 0.0)) throw ParameterError("experiment: h must be positive");
  if (bootstrap < 2) throw ParameterError("experiment: need at least 2 bootstrap resamples");
  functional_by_name(functional);
}

const EigenSeries& reference_series(const DomainSet& set, double alpha, const ExperimentConfig& config) {
  static std::mutex mutex;
  static std::map<std::string, EigenSeries> cache;
  std::ostringstream key;
  key.precision(17);
  key << set.describe() << '|' << alpha << '|' << config.kernel_nodes << '|' << config.kernel_cutoff << '|'
      << config.kernel_angles << '|' << config.reference_tail;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(key.str()); it != cache.end()) return it->second;

  const auto kernel =
      build_kernel(set, set.d, alpha, config.kernel_nodes, config.kernel_cutoff, config.kernel_angles);
  const auto full = eigen_series(kernel);
  const auto top = truncate(full, truncation_for(full, config.reference_tail));
  const double oracle = variance_oracle(set, alpha, set.d);
  EigenSeries s;
  try {
    s = calibrate(top, oracle, Calibration::rescale);
  } catch (const AccuracyError&) {
    s = calibrate(top, oracle, Calibration::gaussian_tail);
  }
  return cache.emplace(key.str(), std::move(s)).first->second;
}

std::vector<double> normalized_replicates(const ExperimentConfig& config, std::size_t r_index) {
  if (r_index >= config.r_grid.size()) throw ParameterError("normalized_replicates: r index out of range");
  const auto params = lrd_params(config.model);
  const double C2 = rank2_coefficient(config);
  const auto G = functional_by_name(config.functional);
  const double r = config.r_grid[r_index];

  SimulationPlan plan;
  plan.model = config.model;
  plan.d = config.model.d;
  plan.h = config.h;
  plan.extent = required_extent(config.set, r, config.h);
  plan.seed = config.seed;
  const auto spectrum = grow_embedding(plan);

  GridField layout;
  layout.d = plan.d;
  layout.n = plan.points_per_axis();
  layout.h = plan.h;
  layout.origin = -static_cast<double>((layout.n - 1) / 2) * plan.h;
  const auto window = window_indices(layout, config.set, r);

  std::vector<double> out(config.replicates);
  parallel_for(config.replicates, config.threads, [&](std::size_t rep) {
    auto eng = make_engine({config.seed, static_cast<std::uint64_t>(r_index), static_cast<std::uint64_t>(rep)});
    const auto field = simulate_field(plan, spectrum, eng);
    out[rep] = normalized_statistic(functional_integral(field, G, window), C2, r, params);
  });
  return out;
}

RhoTable rate_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto params = lrd_params(config.model);
  RhoTable table;
  table.C2 = rank2_coefficient(config);
  table.alpha = params.alpha;
  table.q = resolved_q(config, params);
  table.upsilon = params.upsilon;
  table.kappa_bound = kappa_bound({params.d, params.alpha, table.q, params.upsilon});

  const auto& series = reference_series(config.set, params.alpha, config);
  auto reference = sample(series, config.reference_size, config.seed ^ kReferenceStream, config.threads);
  std::sort(reference.begin(), reference.end());
  table.reference.size = reference.size();
  table.reference.terms = series.m;
  table.reference.variance_oracle = variance_oracle(config.set, params.alpha, params.d);
  table.reference.calibration = series.calibration;
  table.reference.gaussian_tail = series.gaussian_tail;
  table.reference.mode = series.gaussian_tail > 0.0 ? "gaussian-tail" : "rescale";

  for (std::size_t i = 0; i < config.r_grid.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    auto stats = normalized_replicates(config, i);
    std::vector<double> sorted = stats;
    std::sort(sorted.begin(), sorted.end());
    RhoRow row;
    row.r = config.r_grid[i];
    row.replicates = stats.size();
    row.rho = ks_distance_sorted(sorted, reference);
    row.kappa_bound = table.kappa_bound;

    // both samples are resampled; the reference one through multinomial counts over its sorted values
    auto eng = make_engine({config.seed, static_cast<std::uint64_t>(i), kBootstrapStream});
    std::uniform_int_distribution<std::size_t> pick(0, stats.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_ref(0, reference.size() - 1);
    std::vector<double> boot(config.bootstrap), resample(stats.size()), ref_resample(reference.size());
    std::vector<std::uint32_t> counts(reference.size());
    for (std::size_t b = 0; b < config.bootstrap; ++b) {
      for (auto& v : resample) v = stats[pick(eng)];
      std::sort(resample.begin(), resample.end());
      std::fill(counts.begin(), counts.end(), 0u);
      for (std::size_t k = 0; k < reference.size(); ++k) ++counts[pick_ref(eng)];
      std::size_t pos = 0;
      for (std::size_t k = 0; k < reference.size(); ++k)
        for (std::uint32_t c = 0; c < counts[k]; ++c) ref_resample[pos++] = reference[k];
      boot[b] = ks_distance_sorted(resample, ref_resample);
    }
    row.rho_stderr = std::sqrt(sample_variance(boot));
    row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    table.rows.push_back(row);
  }
  return table;
}

SlopeFit slope_fit(const RhoTable& table) {
  std::vector<double> x, y;
  for (const auto& row : table.rows)
    if (row.rho > 3.0 * row.rho_stderr && row.rho > 0.0 && row.r > 0.0) {
      x.push_back(std::log(row.r));
      y.push_back(std::log(row.rho));
    }
  if (x.size() < 4) throw DegenerateFitError("slope_fit: fewer than 4 rows above the noise floor");
  const double n = static_cast<double>(x.size());
  const double mx = sample_mean(x), my = sample_mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFitError("slope_fit: all r values coincide");
  SlopeFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    sse += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  f.kappa_bound = table.kappa_bound;
  f.consistent = -f.slope >= f.kappa_bound - 2.0 * f.slope_stderr;
  return f;
}

std::vector<SmoothingRow> smoothing_inequality_check(const std::vector<double>& x, const std::vector<double>& y,
                                                     const std::vector<double>& z, const std::vector<double>& eps,
                                                     double tol) {
  if (x.empty() || z.empty()) throw InputError("smoothing_inequality_check: empty sample");
  if (x.size() != y.size()) throw InputError("smoothing_inequality_check: X and Y must be paired");
  if (tol < 0.0) tol = 3.0 * std::sqrt(2.0 / static_cast<double>(std::min(x.size(), z.size())));
  std::vector<double> xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xy[i] = x[i] + y[i];
  std::vector<double> zs = z;
  std::sort(zs.begin(), zs.end());
  const double lhs = ks_distance(xy, zs);
  const double rho_xz = ks_distance(x, zs);
  double bandwidth = 1.06 * std::sqrt(sample_variance(z)) * std::pow(static_cast<double>(z.size()), -0.2);
  const double fmax = z.size() >= 10000 ? density_estimate(z, bandwidth).max : 0.0;

  std::vector<SmoothingRow> rows;
  for (double e : eps) {
    if (!(e > 0.0)) throw ParameterError("smoothing_inequality_check: eps must be positive");
    SmoothingRow row;
    row.eps = e;
    row.lhs = lhs;
    row.rho_xz = rho_xz;
    std::vector<double> shifted(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) shifted[i] = zs[i] + e;
    row.rho_shift = ks_distance_sorted(shifted, zs);
    std::size_t big = 0;
    for (double v : y) big += std::abs(v) >= e ? 1 : 0;
    row.p_tail = static_cast<double>(big) / static_cast<double>(y.size());
    row.rhs = row.rho_xz + row.rho_shift + row.p_tail;
    row.slack = row.rhs + tol - row.lhs;
    row.kde_bound = e * fmax;
    row.holds = row.slack >= 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SmoothingRow> smoothing_inequality_check(const std::vector<double>& reference,
                                                     const std::vector<double>& eps, double noise_scale,
                                                     std::uint64_t seed) {
  if (reference.size() < 100000) throw InputError("smoothing_inequality_check: need at least 10^5 reference draws");
  const std::size_t half = reference.size() / 2;
  std::vector<double> x(reference.begin(), reference.begin() + half);
  std::vector<double> z(reference.begin() + half, reference.end());
  std::vector<double> y(half);
  auto eng = make_engine({seed});
  std::normal_distribution<double> g;
  for (auto& v : y) v = noise_scale * g(eng);
  return smoothing_inequality_check(x, y, z, eps);
}

}  // namespace lrd
