// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/covmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lrdlab/errors.hpp"
#include "lrdlab/quadrature.hpp"
#include "lrdlab/specfun.hpp"

namespace lrd {

namespace {

constexpr double kPi = std::numbers::pi;

// Bessel K is below 1e-18 of its scale beyond this argument.
constexpr double kBesselCutoff = 45.0;

double cauchy_density(int d, double theta, double lam) {
  const double hd = 0.5 * d;
  const double log_norm = (hd + theta - 1.0) * std::log(2.0) + hd * std::log(kPi) + specfun::log_gamma(theta);
  return std::exp((theta - hd) * std::log(lam) - log_norm) * specfun::bessel_k(hd - theta, lam);
}

double linnik_prefactor(int d, double lam) {
  const double e = 0.5 * (2.0 - d);
  return std::pow(lam, e) / (std::pow(2.0, -e) * std::pow(kPi, 0.5 * (d + 2)));
}

// σ = 2: the integrand is real for u < 1 and picks up the phase e^{-iπθ} for u > 1.
double linnik_sigma2_density(int d, double theta, double lam) {
  const double nu = 0.5 * (d - 2);
  const double hd = 0.5 * d;
  quad::Options qo;
  qo.abs_tol = 0.0;
  qo.rel_tol = 1e-13;
  qo.max_intervals = 20000;
  auto near = quad::tanh_sinh(
      [&](double u, double da, double) {
        return specfun::bessel_k(nu, lam * u) * std::pow(u, hd) * std::pow(da * (u + 1.0), -theta);
      },
      1.0, 2.0, qo);
  double total = near.value;
  const double upper = kBesselCutoff / lam;
  if (upper > 2.0) {
    auto pts = quad::geometric_points(2.0, upper, 2.0);
    auto far = quad::integrate(
        [&](double u) { return specfun::bessel_k(nu, lam * u) * std::pow(u, hd) * std::pow(u * u - 1.0, -theta); },
        std::span<const double>(pts), qo);
    total += far.value;
  }
  return linnik_prefactor(d, lam) * std::sin(kPi * theta) * total;
}

double linnik_density(int d, double sigma, double theta, double lam) {
  if (sigma == 2.0) {
    // the split integral needs (u²-1)^{-θ} integrable at u = 1
    if (theta >= 1.0) return cauchy_density(d, theta, lam);
    return linnik_sigma2_density(d, theta, lam);
  }
  const double nu = 0.5 * (d - 2);
  const double hd = 0.5 * d;
  const double cs = std::cos(0.5 * kPi * sigma);
  const double sn = std::sin(0.5 * kPi * sigma);
  // -Im (1 + e^{iπσ/2} u^σ)^{-θ} = ρ^{-θ} sin(θφ), written without complex arithmetic
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double us = std::pow(u, sigma);
    const double re = 1.0 + us * cs;
    const double im = us * sn;
    const double rho = std::hypot(re, im);
    const double phi = std::atan2(im, re);
    return specfun::bessel_k(nu, lam * u) * std::pow(u, hd) * std::exp(-theta * std::log(rho)) *
           std::sin(theta * phi);
  };
  const double upper = kBesselCutoff / lam;
  const double lower = 1e-8 * std::min(1.0, upper);
  std::vector<double> pts{0.0};
  for (double p : quad::geometric_points(lower, upper, 2.0)) pts.push_back(p);
  quad::Options qo;
  qo.abs_tol = 0.0;
  qo.rel_tol = 1e-13;
  qo.max_intervals = 20000;
  auto res = quad::integrate(integrand, std::span<const double>(pts), qo);
  if (!res.converged && res.error > 1e-9 * std::abs(res.value))
    throw AccuracyError("spectral_density: Linnik quadrature did not converge");
  return linnik_prefactor(d, lam) * res.value;
}

double local_global_density(double alpha, double theta, double lam) {
  const double z = -0.25 * lam * lam;
  const double w = theta / (theta + alpha);
  const double sinc = lam < 1e-4 ? 1.0 - lam * lam / 6.0 : std::sin(lam) / lam;
  const double f1 = specfun::hyp1f2(0.5 - 0.5 * alpha, 0.5, 1.5 - 0.5 * alpha, z);
  const double f2 = specfun::hyp1f2(0.5 * theta + 0.5, 0.5, 0.5 * theta + 1.5, z);
  const double power = std::pow(lam, alpha - 1.0) * std::sin(0.5 * kPi * alpha) * specfun::gamma_fn(1.0 - alpha);
  return (sinc + w * (f1 / (alpha - 1.0) + power) - alpha / ((theta + 1.0) * (theta + alpha)) * f2) / kPi;
}

// Constant L(t) tends to as t → ∞.
double slowly_varying_limit(const CovarianceModel& m) {
  return m.family == Family::local_global ? m.theta / (m.theta + m.alpha) : 1.0;
}

}  // namespace

CovarianceModel CovarianceModel::cauchy(double theta, int d) {
  CovarianceModel m;
  m.family = Family::cauchy;
  m.theta = theta;
  m.d = d;
  m.validate();
  return m;
}

CovarianceModel CovarianceModel::linnik(double sigma, double theta, int d) {
  CovarianceModel m;
  m.family = Family::linnik;
  m.sigma = sigma;
  m.theta = theta;
  m.d = d;
  m.validate();
  return m;
}

CovarianceModel CovarianceModel::local_global(double alpha, double theta, int d) {
  CovarianceModel m;
  m.family = Family::local_global;
  m.alpha = alpha;
  m.theta = theta;
  m.d = d;
  m.validate();
  return m;
}

void CovarianceModel::validate() const {
  if (d < 1) throw ParameterError("covariance model: dimension must be >= 1");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ParameterError("covariance model: theta must be positive");
  switch (family) {
    case Family::cauchy:
      break;
    case Family::linnik:
      if (!(sigma > 0.0 && sigma <= 2.0)) throw ParameterError("Linnik model: sigma must lie in (0, 2]");
      break;
    case Family::local_global:
      if (d > 2) throw ParameterError("local-global model: defined for d = 1, 2 only");
      if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("local-global model: alpha must be positive");
      if (theta > 0.5 * (3 - d)) throw ParameterError("local-global model: theta must lie in (0, (3-d)/2]");
      break;
  }
}

double CovarianceModel::decay_exponent() const {
  switch (family) {
    case Family::cauchy: return 2.0 * theta;
    case Family::linnik: return sigma * theta;
    case Family::local_global: return alpha;
  }
  return 0.0;
}

std::string CovarianceModel::family_name() const {
  switch (family) {
    case Family::cauchy: return "cauchy";
    case Family::linnik: return "linnik";
    case Family::local_global: return "local-global";
  }
  return "";
}

double covariance_eval(const CovarianceModel& model, double r) {
  model.validate();
  if (!(r >= 0.0)) throw DomainError("covariance_eval: r must be >= 0");
  if (r == 0.0) return 1.0;
  switch (model.family) {
    case Family::cauchy: return std::pow(1.0 + r * r, -model.theta);
    case Family::linnik: return std::pow(1.0 + std::pow(r, model.sigma), -model.theta);
    case Family::local_global: {
      const double a = model.alpha, t = model.theta;
      if (r <= 1.0) return 1.0 - a / (t + a) * std::pow(r, t);
      return t / (t + a) * std::pow(r, -a);
    }
  }
  return 0.0;
}

LongMemoryParams lrd_params(const CovarianceModel& model) {
  model.validate();
  if (!model.long_memory()) throw RegimeError("lrd_params: model is not long-range dependent (need alpha < d/2)");
  LongMemoryParams p;
  p.d = model.d;
  p.alpha = model.decay_exponent();
  const double d = model.d;
  const double theta = model.theta;
  switch (model.family) {
    case Family::cauchy:
      p.L = [theta](double t) { return std::pow(1.0 + 1.0 / (t * t), -theta); };
      p.q_max = std::min(2.0, 0.5 * d - p.alpha);
      p.upsilon = std::min(2.0, d - 2.0 * theta);
      break;
    case Family::linnik: {
      const double sigma = model.sigma;
      p.L = [theta, sigma](double t) { return std::pow(1.0 + std::pow(t, -sigma), -theta); };
      p.q_max = std::min(sigma, 0.5 * d - p.alpha);
      p.upsilon = std::min(sigma, d - sigma * theta);
      break;
    }
    case Family::local_global: {
      if (model.d != 1) throw UnsupportedError("lrd_params: local-global spectral behaviour known for d = 1 only");
      const double alpha = model.alpha;
      const double w = theta / (theta + alpha);
      p.L = [alpha, theta, w](double t) {
        if (t > 1.0) return w;
        return (1.0 - alpha / (theta + alpha) * std::pow(t, theta)) * std::pow(t, alpha);
      };
      p.q_max = 0.5 * d - alpha;
      p.upsilon = 1.0 - alpha;
      break;
    }
  }
  return p;
}

double c2_constant(int d, double alpha) {
  if (d < 1 || !(alpha > 0.0 && alpha < d)) throw DomainError("c2_constant: need 0 < alpha < d");
  return std::exp(specfun::log_gamma(0.5 * (d - alpha)) - alpha * std::log(2.0) - 0.5 * d * std::log(kPi) -
                  specfun::log_gamma(0.5 * alpha));
}

double spectral_density(const CovarianceModel& model, double lam) {
  model.validate();
  if (!(lam > 0.0)) throw DomainError("spectral_density: lambda must be positive");
  switch (model.family) {
    case Family::cauchy: return cauchy_density(model.d, model.theta, lam);
    case Family::linnik: return linnik_density(model.d, model.sigma, model.theta, lam);
    case Family::local_global:
      if (model.d != 1) throw UnsupportedError("spectral_density: local-global density known for d = 1 only");
      if (!(model.alpha < 1.0)) throw UnsupportedError("spectral_density: local-global density needs alpha < 1");
      return local_global_density(model.alpha, model.theta, lam);
  }
  return 0.0;
}

double spectral_leading(const LongMemoryParams& params, double lam) {
  if (!(lam > 0.0)) throw DomainError("spectral_leading: lambda must be positive");
  return c2_constant(params.d, params.alpha) * std::pow(lam, params.alpha - params.d) * params.L(1.0 / lam);
}

double residual_exponent_fit(const CovarianceModel& model, std::span<const double> lam_grid) {
  if (lam_grid.size() < 8) throw InputError("residual_exponent_fit: need at least 8 grid points");
  for (std::size_t i = 0; i < lam_grid.size(); ++i) {
    if (!(lam_grid[i] > 0.0 && lam_grid[i] <= 0.1)) throw InputError("residual_exponent_fit: grid must lie in (0, 0.1]");
    if (i > 0 && !(lam_grid[i] < lam_grid[i - 1])) throw InputError("residual_exponent_fit: grid must be decreasing");
  }
  const auto params = lrd_params(model);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lam_grid.size());
  for (double lam : lam_grid) {
    const double res = std::abs(spectral_density(model, lam) / spectral_leading(params, lam) - 1.0);
    if (!(res > 64.0 * std::numeric_limits<double>::epsilon()))
      throw DegenerateFitError("residual_exponent_fit: residual at machine precision");
    const double x = std::log(lam), y = std::log(res);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double slowly_varying_remainder(const SlowlyVarying& L, double q, std::span<const double> r_grid,
                                std::span<const double> t_grid) {
  if (r_grid.empty() || t_grid.empty()) throw InputError("slowly_varying_remainder: empty grid");
  if (!std::is_sorted(r_grid.begin(), r_grid.end()) || r_grid.back() < 1e3)
    throw InputError("slowly_varying_remainder: r grid must be increasing and reach 1e3");
  if (std::any_of(t_grid.begin(), t_grid.end(), [](double t) { return t < 1.0; }))
    throw InputError("slowly_varying_remainder: t grid must be >= 1");
  double sup = 0.0;
  for (double r : r_grid) {
    const double lr = L(r);
    const double scale = std::pow(r, q);
    for (double t : t_grid) sup = std::max(sup, scale * std::abs(1.0 - L(t * r) / lr));
  }
  return sup;
}

double isotropic_measure(const CovarianceModel& model, double z) {
  model.validate();
  if (!(z >= 0.0)) throw DomainError("isotropic_measure: z must be >= 0");
  if (z == 0.0) return 0.0;
  const int d = model.d;
  const double alpha = model.decay_exponent();
  // below u0 the density is replaced by its power-law asymptote
  const double u0 = std::min(1e-8, 0.5 * z);
  double head = 0.0;
  if (alpha < d) {
    head = c2_constant(d, alpha) * slowly_varying_limit(model) * std::pow(u0, alpha) / alpha;
  } else {
    head = spectral_density(model, u0) * std::pow(u0, d) / d;
  }
  auto pts = quad::geometric_points(u0, z, 4.0);
  quad::Options qo;
  qo.abs_tol = 1e-14;
  qo.rel_tol = 1e-10;
  qo.max_intervals = 20000;
  auto body = quad::integrate([&](double u) { return std::pow(u, d - 1) * spectral_density(model, u); },
                              std::span<const double>(pts), qo);
  if (!body.converged) throw AccuracyError("isotropic_measure: quadrature did not converge");
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / specfun::gamma_fn(0.5 * d);
  return sphere * (head + body.value);
}

double qr_diagnostic(const SpectralFn& f, const LongMemoryParams& params, double r, double lam1, double lam2) {
  if (!(r > 0.0 && lam1 > 0.0 && lam2 > 0.0)) throw DomainError("qr_diagnostic: arguments must be positive");
  const double d = params.d, a = params.alpha;
  const double inner = std::pow(lam1 * lam2, d - a) * f(lam1 / r) * f(lam2 / r);
  return std::pow(r, a - d) / (params.L(r) * c2_constant(params.d, a)) * std::sqrt(inner);
}

double qr_diagnostic(const CovarianceModel& model, double r, double lam1, double lam2) {
  const auto params = lrd_params(model);
  return qr_diagnostic([&](double lam) { return spectral_density(model, lam); }, params, r, lam1, lam2);
}

}  // namespace lrd
