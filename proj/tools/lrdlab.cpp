// SPDX-License-Identifier: Apache-2.0
// lrdlab: command-line front end. Every subcommand reads an optional JSON
// config (--config), applies its flags on top, writes a CSV table (--out or
// stdout) and a JSON run manifest (--manifest, <out>.manifest.json, or stderr).

#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lrdlab/covmodels.hpp"
#include "lrdlab/descriptors.hpp"
#include "lrdlab/errors.hpp"
#include "lrdlab/experiment.hpp"
#include "lrdlab/fieldsim.hpp"
#include "lrdlab/geometry.hpp"
#include "lrdlab/hermite.hpp"
#include "lrdlab/ratelab.hpp"
#include "lrdlab/rng.hpp"
#include "lrdlab/rosenblatt.hpp"
#include "lrdlab/stats.hpp"

using namespace lrd;

namespace {

struct Invocation {
  std::string config_path;
  std::string manifest_path;
  Json overlay = Json::object();
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Json document() const {
    Json doc = config_path.empty() ? Json::object() : read_json_file(config_path);
    if (!doc.is_object()) throw InputError("config: top level must be a JSON object");
    doc.merge_patch(overlay);
    return doc;
  }
};

// Flag whose value lands at a JSON pointer of the overlay, so flags override config keys.
template <class T>
CLI::Option* flag(CLI::App* app, Invocation& inv, const std::string& name, const std::string& pointer,
                  const std::string& help) {
  return app->add_option_function<T>(
      name, [&inv, pointer](const T& v) { inv.overlay[Json::json_pointer(pointer)] = v; }, help);
}

// Inline JSON object (e.g. a model descriptor) placed at a pointer.
CLI::Option* json_flag(CLI::App* app, Invocation& inv, const std::string& name, const std::string& pointer,
                       const std::string& help) {
  return app->add_option_function<std::string>(
      name,
      [&inv, pointer](const std::string& text) {
        try {
          inv.overlay[Json::json_pointer(pointer)] = Json::parse(text);
        } catch (const nlohmann::json::parse_error&) {
          throw CLI::ValidationError(pointer, "not valid JSON");
        }
      },
      help);
}

void model_flags(CLI::App* app, Invocation& inv) {
  json_flag(app, inv, "--model", "/model", "model descriptor as JSON");
  flag<std::string>(app, inv, "--family", "/model/family", "cauchy | linnik | local-global");
  flag<double>(app, inv, "--theta", "/model/theta", "model parameter θ");
  flag<double>(app, inv, "--sigma", "/model/sigma", "Linnik σ");
  flag<double>(app, inv, "--alpha", "/model/alpha", "local-global α");
  flag<int>(app, inv, "--d", "/model/d", "dimension");
}

void set_flags(CLI::App* app, Invocation& inv) {
  json_flag(app, inv, "--set", "/set", "window descriptor as JSON");
  flag<std::string>(app, inv, "--shape", "/set/shape", "ball | rect");
  flag<double>(app, inv, "--radius", "/set/R", "ball radius");
  flag<int>(app, inv, "--set-d", "/set/d", "ball dimension");
  flag<std::vector<double>>(app, inv, "--lower", "/set/a", "rectangle lower corner");
  flag<std::vector<double>>(app, inv, "--upper", "/set/b", "rectangle upper corner");
}

template <class T>
T value(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config: bad value for '") + key + "'");
  }
}

std::vector<double> geometric_grid(double from, double to, int n) {
  if (n < 2 || !(from > 0.0) || !(to > 0.0)) throw InputError("grid: need n >= 2 and positive end points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = from * std::pow(to / from, static_cast<double>(i) / (n - 1));
  return g;
}

std::vector<double> linear_grid(double from, double to, int n) {
  if (n < 2) throw InputError("grid: need n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = from + (to - from) * static_cast<double>(i) / (n - 1);
  return g;
}

// explicit list under key, otherwise a geometric grid from <key>_min, <key>_max, points
std::vector<double> grid_from(const Json& doc, const char* key, double lo, double hi, int n) {
  if (doc.contains(key)) return value<std::vector<double>>(doc, key, {});
  const std::string k(key);
  return geometric_grid(value<double>(doc, (k + "_min").c_str(), lo), value<double>(doc, (k + "_max").c_str(), hi),
                        value<int>(doc, "points", n));
}

CovarianceModel model_of(const Json& doc) {
  if (!doc.contains("model")) throw InputError("a model descriptor is required (--model or --family/--theta/--d)");
  return model_from_json(doc["model"]);
}

DomainSet set_of(const Json& doc) {
  if (!doc.contains("set")) return DomainSet::rect({-0.5}, {0.5});
  return set_from_json(doc["set"]);
}

void emit(const Invocation& inv, const Json& doc, const CsvTable& csv, const std::vector<std::uint64_t>& seeds,
          const Json& extra = Json::object()) {
  const std::string out = value<std::string>(doc, "out", "");
  if (out.empty())
    std::cout << csv.str();
  else
    csv.write(out);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - inv.start).count();
  const Json manifest = run_manifest(inv.command, doc, seeds, wall, extra);
  if (!inv.manifest_path.empty())
    write_json(manifest, inv.manifest_path);
  else if (!out.empty())
    write_json(manifest, out + ".manifest.json");
  else
    std::cerr << manifest.dump(2) << '\n';
}

std::uint64_t seed_of(const Json& doc) { return value<std::uint64_t>(doc, "seed", 1); }
unsigned threads_of(const Json& doc) { return value<unsigned>(doc, "threads", 1); }

// ---------------------------------------------------------------------------

void covariance_eval_cmd(const Invocation& inv) {
  const Json doc = inv.document();
  const auto model = model_of(doc);
  CsvTable csv({"r", "covariance"});
  for (double r : grid_from(doc, "r", 0.01, 1000.0, 50)) csv.add_row(std::vector<double>{r, covariance_eval(model, r)});
  emit(inv, doc, csv, {});
}

void spectral_eval(const Invocation& inv) {
  const Json doc = inv.document();
  const auto model = model_of(doc);
  std::optional<LongMemoryParams> params;
  if (model.long_memory()) params = lrd_params(model);
  CsvTable csv({"lambda", "density", "leading", "ratio"});
  for (double lam : grid_from(doc, "lambda", 1e-4, 10.0, 50)) {
    const double f = spectral_density(model, lam);
    const double lead = params ? spectral_leading(*params, lam) : std::nan("");
    csv.add_row(std::vector<double>{lam, f, lead, f / lead});
  }
  Json extra;
  if (params) extra["long_memory"] = {{"alpha", params->alpha}, {"q_max", params->q_max}, {"upsilon", params->upsilon}};
  emit(inv, doc, csv, {}, extra);
}

void spectral_fit_upsilon(const Invocation& inv) {
  const Json doc = inv.document();
  const auto model = model_of(doc);
  auto grid = grid_from(doc, "lambda", 1e-5, 1e-2, 12);
  std::sort(grid.rbegin(), grid.rend());
  const double fitted = residual_exponent_fit(model, grid);
  const auto params = lrd_params(model);
  CsvTable csv({"family", "d", "fitted_upsilon", "upsilon", "difference"});
  csv.add_row({model.family_name(), std::to_string(model.d), format_double(fitted), format_double(params.upsilon),
               format_double(fitted - params.upsilon)});
  emit(inv, doc, csv, {}, {{"lambda_grid", grid}});
}

void geometry_ft(const Invocation& inv) {
  const Json doc = inv.document();
  const auto set = set_of(doc);
  auto dir = value<std::vector<double>>(doc, "direction", {});
  if (dir.empty()) {
    dir.assign(set.d, 0.0);
    dir[0] = 1.0;
  }
  if (static_cast<int>(dir.size()) != set.d) throw InputError("geometry ft: direction must have d entries");
  const std::vector<double> t = doc.contains("t") ? value<std::vector<double>>(doc, "t", {})
                                                  : linear_grid(0.0, value<double>(doc, "t_max", 20.0),
                                                                value<int>(doc, "points", 101));
  CsvTable csv({"t", "re", "im", "abs"});
  std::vector<double> x(set.d);
  for (double s : t) {
    for (int j = 0; j < set.d; ++j) x[j] = s * dir[j];
    const auto v = indicator_ft(set, x);
    csv.add_row(std::vector<double>{s, v.real(), v.imag(), std::abs(v)});
  }
  emit(inv, doc, csv, {}, {{"volume", volume(set)}, {"diameter", diameter(set)}});
}

void hermite_coeffs(const Invocation& inv) {
  const Json doc = inv.document();
  const auto name = value<std::string>(doc, "functional", "h2");
  const auto G = functional_by_name(name);
  const int J = value<int>(doc, "order", 8);
  const int quad = value<int>(doc, "quad_order", std::max(400, 2 * J));
  const auto exp = hermite_coefficients(G, J, quad);
  CsvTable csv({"j", "coefficient"});
  for (int j = 0; j <= J; ++j) csv.add_row({std::to_string(j), format_double(exp.coeffs[j])});
  Json extra{{"parseval_defect", parseval_defect(G, exp)}};
  extra["rank"] = exp.rank ? Json(*exp.rank) : Json(nullptr);
  emit(inv, doc, csv, {}, extra);
}

void simulate_field_cmd(const Invocation& inv) {
  const Json doc = inv.document();
  SimulationPlan plan;
  plan.model = model_of(doc);
  plan.d = plan.model.d;
  plan.h = value<double>(doc, "h", 0.5);
  plan.extent = value<double>(doc, "extent", 16.0);
  plan.padding = value<double>(doc, "padding", 4.0);
  plan.seed = seed_of(doc);
  const auto spectrum = value<bool>(doc, "grow", true) ? grow_embedding(plan) : circulant_spectrum(plan);
  auto eng = make_engine({plan.seed});
  const auto field = simulate_field(plan, spectrum, eng);

  std::vector<std::string> header;
  for (int j = 0; j < field.d; ++j) header.push_back("x" + std::to_string(j + 1));
  header.push_back("value");
  CsvTable csv(header);
  std::vector<double> row(field.d + 1);
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    std::size_t rest = k;
    for (int j = field.d - 1; j >= 0; --j) {
      row[j] = field.coordinate(static_cast<std::int64_t>(rest % field.n));
      rest /= field.n;
    }
    row[field.d] = field.values[k];
    csv.add_row(row);
  }
  const auto snapshot = value<std::string>(doc, "snapshot", "");
  if (!snapshot.empty()) write_snapshot(field, snapshot);
  Json extra;
  extra["points_per_axis"] = field.n;
  extra["torus_size"] = spectrum.m;
  extra["padding"] = plan.padding;
  extra["min_eigenvalue"] = spectrum.min_eigenvalue;
  extra["max_eigenvalue"] = spectrum.max_eigenvalue;
  extra["clamped"] = spectrum.clamped;
  emit(inv, doc, csv, {plan.seed}, extra);
}

EigenSeries build_series(const Json& doc, Json& info) {
  const auto set = set_of(doc);
  const double alpha = value<double>(doc, "alpha", 0.25);
  const auto kernel = build_kernel(set, set.d, alpha, value<int>(doc, "kernel_nodes", 820),
                                   value<double>(doc, "kernel_cutoff", 400.0), value<int>(doc, "kernel_angles", 24));
  const auto full = eigen_series(kernel);
  auto top = truncate(full, truncation_for(full, value<double>(doc, "reference_tail", 1e-3)));
  const double oracle = variance_oracle(set, alpha, set.d);
  info = {{"alpha", alpha},
          {"nodes", kernel.size()},
          {"terms", top.m},
          {"variance_oracle", oracle},
          {"uncalibrated_variance", 2.0 * top.sum_squares()}};
  const auto mode = value<std::string>(doc, "calibration", "auto");
  if (mode == "none") return top;
  if (mode == "rescale") return calibrate(top, oracle, Calibration::rescale);
  if (mode == "gaussian-tail") return calibrate(top, oracle, Calibration::gaussian_tail);
  if (mode != "auto") throw InputError("rosenblatt: calibration must be auto, rescale, gaussian-tail or none");
  try {
    return calibrate(top, oracle, Calibration::rescale);
  } catch (const AccuracyError&) {
    return calibrate(top, oracle, Calibration::gaussian_tail);
  }
}

void rosenblatt_build(const Invocation& inv) {
  const Json doc = inv.document();
  Json info;
  const auto series = build_series(doc, info);
  info["calibration"] = series.calibration;
  info["gaussian_tail"] = series.gaussian_tail;
  const auto path = value<std::string>(doc, "series", "");
  if (!path.empty()) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << series_to_json(series) << '\n';
  }
  CsvTable csv({"j", "eigenvalue"});
  for (std::size_t j = 0; j < series.eigenvalues.size(); ++j)
    csv.add_row({std::to_string(j + 1), format_double(series.eigenvalues[j])});
  emit(inv, doc, csv, {}, {{"series", info}});
}

void rosenblatt_sample(const Invocation& inv) {
  const Json doc = inv.document();
  Json info;
  EigenSeries series;
  const auto path = value<std::string>(doc, "series", "");
  if (!path.empty()) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    series = series_from_json(ss.str());
    info["source"] = path;
  } else {
    series = build_series(doc, info);
  }
  const auto n = value<std::size_t>(doc, "n", 100000);
  const auto seed = seed_of(doc);
  const auto draws = sample(series, n, seed, threads_of(doc));
  CsvTable csv({"x"});
  for (double v : draws) csv.add_row(std::vector<double>{v});
  info["cumulant2"] = cumulant(series, 2);
  info["cumulant3"] = cumulant(series, 3);
  info["sample_mean"] = sample_mean(draws);
  if (draws.size() > 1) info["sample_variance"] = sample_variance(draws);
  emit(inv, doc, csv, {seed}, {{"series", info}});
}

RateInputs rate_inputs(const Json& doc) {
  RateInputs in;
  if (doc.contains("model")) {
    const auto params = lrd_params(model_from_json(doc["model"]));
    in = {params.d, params.alpha, 0.999 * params.q_max, params.upsilon};
  }
  in.d = value<int>(doc, "d", in.d);
  in.alpha = value<double>(doc, "alpha", in.alpha);
  in.q = value<double>(doc, "q", in.q);
  in.upsilon = value<double>(doc, "upsilon", in.upsilon);
  in.validate();
  return in;
}

void rate_bound(const Invocation& inv) {
  const Json doc = inv.document();
  const auto in = rate_inputs(doc);
  CsvTable csv({"d", "alpha", "q", "upsilon", "harmonic_term", "kappa1", "geometric_term", "kappa_bound",
                "within_theorem"});
  csv.add_row({std::to_string(in.d), format_double(in.alpha), format_double(in.q), format_double(in.upsilon),
               format_double(harmonic_term(in.d, in.alpha, in.upsilon)), format_double(kappa1(in)),
               format_double(geometric_term(in.d, in.alpha)), format_double(kappa_bound(in)),
               in.within_theorem() ? "true" : "false"});
  emit(inv, doc, csv, {});
}

void rate_curves(const Invocation& inv) {
  const Json doc = inv.document();
  const auto preset = value<std::string>(doc, "preset", "all");
  const int points = value<int>(doc, "points", 99);
  const auto names = preset == "all" ? curve_presets() : std::vector<std::string>{preset};
  CsvTable csv({"preset", "alpha", "kappa1_over_3", "geometric_term_over_3", "kappa_bound"});
  for (const auto& name : names) {
    const auto spec = curve_preset(name);
    for (const auto& row : curve_table(spec, alpha_grid(spec.d, points)))
      csv.add_row({name, format_double(row.alpha), format_double(row.kappa1_over_3),
                   format_double(row.geometric_term_over_3), format_double(row.kappa_bound)});
  }
  emit(inv, doc, csv, {});
}

void rate_experiment_cmd(const Invocation& inv) {
  const Json doc = inv.document();
  const auto config = config_from_json(doc);
  const auto table = rate_experiment(config);
  Json extra = rho_table_manifest(table);
  try {
    const auto fit = slope_fit(table);
    extra["slope_fit"] = {{"slope", fit.slope},
                          {"intercept", fit.intercept},
                          {"r2", fit.r2},
                          {"slope_stderr", fit.slope_stderr},
                          {"points", fit.points},
                          {"consistent_with_bound", fit.consistent}};
  } catch (const DegenerateFitError& e) {
    extra["slope_fit"] = {{"error", e.what()}};
  }
  extra["seed_derivation"] = "replicate (seed, r_index, replicate); reference seed xor stream tag; bootstrap (seed, r_index, tag)";
  emit(inv, config_to_json(config), rho_table_csv(table), {config.seed}, extra);
}

void verify_supmin(const Invocation& inv) {
  const Json doc = inv.document();
  const auto in = rate_inputs(doc);
  SupMinSearch search;
  search.resolution = value<int>(doc, "resolution", 1000);
  const double gamma = value<double>(doc, "gamma", 0.5);
  CsvTable csv({"identity", "grid_value", "closed_form", "deviation"});
  auto add = [&](const std::string& name, const SupMinReport& r) {
    csv.add_row({name, format_double(r.grid_value), format_double(r.closed_form), format_double(r.deviation)});
  };
  add("inner", supmin_inner_check(in.d, in.alpha, gamma, search));
  add("outer", supmin_outer_check(in.d, in.alpha, in.upsilon, search));
  add("kappa0", kappa0_identity_check(in.d, in.alpha, in.q, in.upsilon, search));
  add("beta", beta_check(kappa1(in), search));
  emit(inv, doc, csv, {});
}

void rate_flags(CLI::App* app, Invocation& inv) {
  json_flag(app, inv, "--model", "/model", "derive d, α, q, υ from a model descriptor");
  flag<int>(app, inv, "--d", "/d", "dimension");
  flag<double>(app, inv, "--alpha", "/alpha", "α in (0, d/2)");
  flag<double>(app, inv, "--q", "/q", "remainder exponent q");
  flag<double>(app, inv, "--upsilon", "/upsilon", "spectral exponent υ");
}

}  // namespace

int main(int argc, char** argv) {
  Invocation inv;
  CLI::App app{"lrdlab: long-memory random field toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", inv.config_path, "JSON config document")->check(CLI::ExistingFile);
  app.add_option("--manifest", inv.manifest_path, "run manifest path (default <out>.manifest.json)");
  flag<std::uint64_t>(&app, inv, "--seed", "/seed", "master seed");
  flag<std::string>(&app, inv, "--out", "/out", "CSV output path (default stdout)");
  flag<unsigned>(&app, inv, "--threads", "/threads", "worker threads");

  std::function<void(const Invocation&)> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<void(const Invocation&)> fn) {
    auto* sub = parent->add_subcommand(name, help);
    sub->callback([&, fn, sub] {
      inv.command.clear();
      for (auto* p = sub; p != nullptr && p->get_parent() != nullptr; p = p->get_parent())
        inv.command = p->get_name() + (inv.command.empty() ? "" : " " + inv.command);
      action = fn;
    });
    return sub;
  };

  auto* cov = app.add_subcommand("covariance", "covariance functions")->require_subcommand(1);
  auto* cov_eval = leaf(cov, "eval", "B(r) on a grid", covariance_eval_cmd);
  model_flags(cov_eval, inv);
  flag<std::vector<double>>(cov_eval, inv, "--r", "/r", "distances");
  flag<double>(cov_eval, inv, "--r-min", "/r_min", "smallest distance");
  flag<double>(cov_eval, inv, "--r-max", "/r_max", "largest distance");
  flag<int>(cov_eval, inv, "--points", "/points", "grid size");

  auto* spec = app.add_subcommand("spectral", "spectral densities")->require_subcommand(1);
  auto* spec_eval = leaf(spec, "eval", "f(λ) and its leading term", spectral_eval);
  auto* spec_fit = leaf(spec, "fit-upsilon", "fit the second-order exponent υ", spectral_fit_upsilon);
  for (auto* s : {spec_eval, spec_fit}) {
    model_flags(s, inv);
    flag<std::vector<double>>(s, inv, "--lambda", "/lambda", "frequencies");
    flag<double>(s, inv, "--lambda-min", "/lambda_min", "smallest frequency");
    flag<double>(s, inv, "--lambda-max", "/lambda_max", "largest frequency");
    flag<int>(s, inv, "--points", "/points", "grid size");
  }

  auto* geo = app.add_subcommand("geometry", "observation windows")->require_subcommand(1);
  auto* geo_ft = leaf(geo, "ft", "Fourier transform of the window indicator along a ray", geometry_ft);
  set_flags(geo_ft, inv);
  flag<std::vector<double>>(geo_ft, inv, "--direction", "/direction", "ray direction");
  flag<std::vector<double>>(geo_ft, inv, "--t", "/t", "ray parameters");
  flag<double>(geo_ft, inv, "--t-max", "/t_max", "largest ray parameter");
  flag<int>(geo_ft, inv, "--points", "/points", "grid size");

  auto* her = app.add_subcommand("hermite", "Hermite expansions")->require_subcommand(1);
  auto* her_coeffs = leaf(her, "coeffs", "Hermite coefficients of a named functional", hermite_coeffs);
  flag<std::string>(her_coeffs, inv, "--functional", "/functional", "h2 | abs-centered | ...");
  flag<int>(her_coeffs, inv, "--order", "/order", "largest index J");
  flag<int>(her_coeffs, inv, "--quad-order", "/quad_order", "Gauss-Hermite points");

  auto* sim = app.add_subcommand("simulate", "field simulation")->require_subcommand(1);
  auto* sim_field = leaf(sim, "field", "one lattice draw by circulant embedding", simulate_field_cmd);
  model_flags(sim_field, inv);
  flag<double>(sim_field, inv, "--step", "/h", "lattice step");
  flag<double>(sim_field, inv, "--extent", "/extent", "half-width of the lattice");
  flag<double>(sim_field, inv, "--padding", "/padding", "torus side over field side");
  flag<std::string>(sim_field, inv, "--snapshot", "/snapshot", "also write a binary snapshot");

  auto* ros = app.add_subcommand("rosenblatt", "limit law")->require_subcommand(1);
  auto* ros_build = leaf(ros, "build", "eigenvalue series of the limit law", rosenblatt_build);
  auto* ros_sample = leaf(ros, "sample", "draws from the limit law", rosenblatt_sample);
  for (auto* s : {ros_build, ros_sample}) {
    set_flags(s, inv);
    flag<double>(s, inv, "--alpha", "/alpha", "α in (0, d/2)");
    flag<int>(s, inv, "--kernel-nodes", "/kernel_nodes", "quadrature nodes per half-axis or ray");
    flag<double>(s, inv, "--kernel-cutoff", "/kernel_cutoff", "largest frequency");
    flag<int>(s, inv, "--kernel-angles", "/kernel_angles", "directions (d = 2)");
    flag<double>(s, inv, "--tail", "/reference_tail", "discarded squared eigenvalue mass");
    flag<std::string>(s, inv, "--calibration", "/calibration", "auto | rescale | gaussian-tail | none");
    flag<std::string>(s, inv, "--series", "/series", "series JSON (written by build, read by sample)");
  }
  flag<std::size_t>(ros_sample, inv, "--n", "/n", "number of draws");

  auto* rate = app.add_subcommand("rate", "convergence rates")->require_subcommand(1);
  auto* rate_b = leaf(rate, "bound", "κ₁ and the rate exponent", rate_bound);
  rate_flags(rate_b, inv);
  auto* rate_c = leaf(rate, "curves", "rate exponents over α", rate_curves);
  flag<std::string>(rate_c, inv, "--preset", "/preset", "cauchy-d1 | linnik-d2 | linnik-d3 | all");
  flag<int>(rate_c, inv, "--points", "/points", "α grid size");
  auto* rate_e = leaf(rate, "experiment", "Kolmogorov distance to the limit law over r", rate_experiment_cmd);
  json_flag(rate_e, inv, "--model", "/model", "model descriptor as JSON");
  json_flag(rate_e, inv, "--set", "/set", "window descriptor as JSON");
  flag<std::string>(rate_e, inv, "--functional", "/functional", "functional name (Hermite rank 2)");
  flag<std::vector<double>>(rate_e, inv, "--r", "/r_grid", "increasing r grid");
  flag<std::size_t>(rate_e, inv, "--replicates", "/replicates", "replicates per r");
  flag<std::size_t>(rate_e, inv, "--reference-size", "/reference_size", "limit-law draws");
  flag<std::size_t>(rate_e, inv, "--bootstrap", "/bootstrap", "bootstrap resamples");
  flag<double>(rate_e, inv, "--step", "/h", "lattice step");
  flag<double>(rate_e, inv, "--q", "/q", "remainder exponent (0: 0.999 q_max)");
  flag<int>(rate_e, inv, "--kernel-nodes", "/kernel_nodes", "reference quadrature nodes");
  flag<double>(rate_e, inv, "--kernel-cutoff", "/kernel_cutoff", "reference frequency cutoff");

  auto* ver = app.add_subcommand("verify", "numerical checks")->require_subcommand(1);
  auto* ver_s = leaf(ver, "supmin", "grid search against the closed-form sup-min values", verify_supmin);
  rate_flags(ver_s, inv);
  flag<double>(ver_s, inv, "--gamma", "/gamma", "γ for the inner identity");
  flag<int>(ver_s, inv, "--resolution", "/resolution", "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    action(inv);
  } catch (const std::exception& e) {
    std::cerr << "lrdlab " << inv.command << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
