#include "aparareal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "aparareal/averaging.hpp"
#include "aparareal/integrators.hpp"

namespace aparareal {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

json spec_json(const ExperimentSpec& s) {
  return {
      {"name", s.name},
      {"epsilon", s.params.epsilon},
      {"froude", s.params.froude},
      {"mu", s.params.mu},
      {"modes", s.grid.num_modes},
      {"domain_length", s.grid.domain_length},
      {"dealias_fraction", s.grid.dealias_fraction},
      {"slices", s.num_slices},
      {"delta_T", s.delta_T},
      {"delta_t", s.delta_t},
      {"fine_steps_per_slice", s.fine_steps_per_slice()},
      {"total_time", s.total_time()},
      {"t0", s.t0},
      {"match_coarse_step", s.match_coarse_step},
      {"kernel_window", s.kernel_window()},
      {"mbar", s.mbar},
      {"tol", s.tol},
      {"max_iter", s.max_iter},
      {"reference_dt", s.effective_reference_dt()},
      {"baseline", std::string(to_string(s.baseline))},
      {"run_baseline", s.run_baseline},
      {"timing", s.record_timing},
      {"workers", s.workers},
      {"output", s.output_dir.string()},
  };
}

SpectralState run_baseline(const ExperimentSpec& spec, const WaveBasis& basis,
                           const SpectralState& u0, std::size_t steps) {
  switch (spec.baseline) {
    case Baseline::strang:
      return StrangStepper(basis, spec.delta_t).run(u0, steps);
    case Baseline::etdrk4:
      return Etdrk4Stepper(basis, spec.delta_t).run(u0, steps);
    case Baseline::integrating_factor:
      return IntegratingFactorStepper(basis, spec.delta_t).run(u0, steps);
  }
  throw ConfigError("unknown baseline");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::strang: return "strang";
    case Baseline::etdrk4: return "etdrk4";
    case Baseline::integrating_factor: return "integrating_factor";
  }
  return "unknown";
}

Baseline parse_baseline(std::string_view name) {
  if (name == "strang") return Baseline::strang;
  if (name == "etdrk4") return Baseline::etdrk4;
  if (name == "integrating_factor" || name == "integrating-factor") {
    return Baseline::integrating_factor;
  }
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

// ------------------------------------------------------------------- spec

void ExperimentSpec::validate() const {
  params.validate();
  grid.validate();
  if (!(t0 > 0.0) || !std::isfinite(t0)) {
    throw ConfigError("averaging window t0 must be positive");
  }
  if (mbar < 2) throw ConfigError("mbar must be at least 2");
  if (workers == 0) throw ConfigError("workers must be at least 1");
  const double ref = effective_reference_dt();
  if (!(ref > 0.0) || ref > delta_t * (1.0 + 1e-12)) {
    throw ConfigError("reference_dt must be positive and not exceed delta_t");
  }
  FineConfig::for_slice(delta_T, ref);
  parareal_config().validate();
}

std::size_t ExperimentSpec::fine_steps_per_slice() const {
  return FineConfig::for_slice(delta_T, delta_t).steps_per_slice;
}

PararealConfig ExperimentSpec::parareal_config() const {
  PararealConfig cfg;
  cfg.num_slices = num_slices;
  cfg.delta_T = delta_T;
  cfg.delta_t = delta_t;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.coarse = {delta_T, make_kernel(mbar, kernel_window()), 1};
  cfg.fine = FineConfig::for_slice(delta_T, delta_t);
  cfg.workers = workers;
  return cfg;
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec s;
  s.params.mu = 1e-4;
  s.params.froude = 1.0;
  std::string_view base = name;
  const bool desk = base.ends_with("-desk");
  if (desk) base.remove_suffix(5);

  if (base == "eps2") {
    s.params.epsilon = 1e-2;
    s.delta_T = 0.5;
    s.delta_t = 1.0 / 2500.0;
    s.num_slices = 1250;
    s.t0 = 3.0;
    s.mbar = 450;
  } else if (base == "eps1") {
    s.params.epsilon = 1e-1;
    s.delta_T = 0.3;
    s.delta_t = 1.0 / 250.0;
    s.num_slices = 150;
    s.t0 = 0.5;
    s.mbar = 10;
  } else if (base == "eps0") {
    s.params.epsilon = 1.0;
    s.delta_T = 0.3;
    s.delta_t = 1.0 / 200.0;
    s.num_slices = 60;
    s.t0 = 0.3;
    s.mbar = 10;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  if (desk) s.num_slices = 40;
  s.name = std::string(name);
  return s;
}

std::vector<std::string> preset_names() {
  return {"eps2", "eps1", "eps0", "eps2-desk", "eps1-desk", "eps0-desk"};
}

// ------------------------------------------------------------ experiment

SpectralState initial_condition(const GridSpec& g) {
  g.validate();
  constexpr double pi = std::numbers::pi;
  PhysicalState p(g.num_modes);
  auto h = p.field(Field::h);
  double mean = 0.0;
  for (std::size_t j = 0; j < g.num_modes; ++j) {
    const double x = g.grid_point(j);
    const double a = x - pi / 2.0;
    const double b = x - pi;
    h[j] = std::exp(-4.0 * a * a) * std::sin(3.0 * a) +
           std::exp(-2.0 * b * b) * std::sin(8.0 * b);
    mean += h[j];
  }
  mean /= static_cast<double>(g.num_modes);
  double peak = 0.0;
  for (double& v : h) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  for (double& v : h) v /= peak;
  return to_spectral(p, g);
}

Trajectory reference_solution(const ExperimentSpec& spec, const WaveBasis& basis) {
  const FineConfig ref =
      FineConfig::for_slice(spec.delta_T, spec.effective_reference_dt());
  return serial_fine_trajectory(initial_condition(spec.grid), spec.num_slices,
                                ref, basis);
}

double speedup_estimate(std::size_t num_slices, std::size_t fine_steps,
                        std::size_t iterations, double tau_ratio) {
  const double n = static_cast<double>(num_slices);
  const double m = static_cast<double>(fine_steps);
  const double nu = static_cast<double>(iterations);
  return tau_ratio * n * m / (nu * (tau_ratio * m + n + 1.0) + n);
}

BalancedParameters balanced_parameters(double epsilon, double a,
                                       double tau_ratio) {
  const double scale = std::sqrt(1.0 / (a * epsilon));
  return {std::sqrt(tau_ratio) * scale, std::sqrt(1.0 / tau_ratio) * scale,
          std::sqrt(tau_ratio) * scale};
}

RunReport compute_experiment(const ExperimentSpec& spec) {
  spec.validate();
  RunReport report;
  report.spec = spec;

  const WaveBasis basis(spec.grid, spec.params);
  const SpectralState u0 = initial_condition(spec.grid);

  auto start = Clock::now();
  const Trajectory reference = reference_solution(spec, basis);
  report.reference_seconds = seconds_since(start);

  start = Clock::now();
  PararealRun run = PararealSolver(spec.parareal_config(), basis).run(u0, &reference);
  report.parareal_seconds = seconds_since(start);
  report.records = std::move(run.records);
  report.converged = run.converged;

  const std::size_t m = spec.fine_steps_per_slice();
  report.speedup_estimate = speedup_estimate(
      spec.num_slices, m, std::max<std::size_t>(report.iterations(), 1), 1.0);

  if (spec.run_baseline) {
    start = Clock::now();
    const SpectralState end = run_baseline(spec, basis, u0, spec.num_slices * m);
    report.baseline_seconds = seconds_since(start);
    report.baseline_error =
        max_rel_linf_error(to_physical(end, spec.grid),
                           to_physical(reference.snapshots.back(), spec.grid));
  }

  if (!spec.record_timing) {
    for (auto& r : report.records) {
      r.coarse_seconds = 0.0;
      r.correction_seconds = 0.0;
    }
    report.reference_seconds = 0.0;
    report.parareal_seconds = 0.0;
    if (report.baseline_seconds) report.baseline_seconds = 0.0;
  }
  return report;
}

// --------------------------------------------------------------- reports

std::string report_csv(const RunReport& report) {
  std::string out =
      "iteration,residual,max_rel_linf_error,coarse_seconds,correction_seconds\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.iteration);
    out += ',';
    if (r.residual) out += number(*r.residual);
    out += ',';
    if (r.max_rel_linf_error) out += number(*r.max_rel_linf_error);
    out += ',';
    out += number(r.coarse_seconds);
    out += ',';
    out += number(r.correction_seconds);
    out += '\n';
  }
  return out;
}

std::string report_json(const RunReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({
        {"iteration", r.iteration},
        {"residual", r.residual ? json(*r.residual) : json(nullptr)},
        {"max_rel_linf_error",
         r.max_rel_linf_error ? json(*r.max_rel_linf_error) : json(nullptr)},
        {"coarse_seconds", r.coarse_seconds},
        {"correction_seconds", r.correction_seconds},
    });
  }
  json doc = {
      {"config", spec_json(report.spec)},
      {"records", records},
      {"iterations", report.iterations()},
      {"converged", report.converged},
      {"speedup_estimate", report.speedup_estimate},
      {"wall_seconds",
       {{"reference", report.reference_seconds},
        {"parareal", report.parareal_seconds},
        {"baseline", report.baseline_seconds ? json(*report.baseline_seconds)
                                             : json(nullptr)}}},
      {"baseline_error",
       report.baseline_error ? json(*report.baseline_error) : json(nullptr)},
  };
  return doc.dump(2) + "\n";
}

void write_report(const RunReport& report) {
  const auto& dir = report.spec.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
  write_file(dir / (report.spec.name + ".csv"), report_csv(report));
  write_file(dir / (report.spec.name + ".json"), report_json(report));
}

RunReport run_experiment(const ExperimentSpec& spec) {
  RunReport report = compute_experiment(spec);
  write_report(report);
  return report;
}

}  // namespace aparareal
