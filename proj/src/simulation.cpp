#include "funreg/simulation.hpp"

#include "funreg/error.hpp"
#include "funreg/numerics.hpp"
#include "funreg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <random>

namespace funreg::sim {

using std::numbers::pi;

void
SimulationConfig::validate() const
{
  if (n_train < 1 || n_test < 1)
    throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive");
  if (grid_size < 5)
    throw Error(ErrorCode::GridTooShort, "simulated curves need at least 5 grid points");
  if (!(noise_variance >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "noise variance must be nonnegative");
  if (monte_carlo_reps < 1)
    throw Error(ErrorCode::InvalidArgument, "monte_carlo_reps must be positive");
}

Curve
generate_curve(double omega, double a, double b, const GridPtr& grid)
{
  if (std::abs(grid->front() + 1.0) > 1e-12 || std::abs(grid->back() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "simulated curves live on a grid spanning [-1, 1]");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = (*grid)[i];
    v[i] = std::sin(omega * t) + (a + 2 * pi) * t + b;
  }
  return Curve(grid, std::move(v));
}

double
true_regression(const Curve& curve)
{
  const auto& grid = curve.grid();
  if (grid.size() < 5)
    throw Error(ErrorCode::GridTooShort, "true regression needs at least 5 grid points");
  if (std::abs(grid.front() + 1.0) > 1e-12 || std::abs(grid.back() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "true regression integrates over [-1, 1]");
  const auto d = differentiate(curve, 1);
  const auto w = trapezoid_weights(grid);
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += w[i] * std::abs(d[i]) * (1.0 - std::cos(pi * grid[i]));
  return s;
}

SimulatedSamples
generate_functional_sample(const SimulationConfig& config)
{
  config.validate();
  auto grid = std::make_shared<const SamplingGrid>(
    SamplingGrid::uniform(-1.0, 1.0, config.grid_size));
  // curves and noise use separate streams: the curves do not depend on the noise level
  auto engine = rng::stream_engine(config.seed, 0);
  auto noise_engine = rng::stream_engine(config.seed, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  std::normal_distribution<double> noise(0.0, std::sqrt(config.noise_variance));

  auto draw = [&](std::size_t count, std::vector<double>& truth) {
    std::vector<Curve> curves;
    std::vector<double> y;
    curves.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double omega = angle(engine);
      const double a = unit(engine);
      const double b = unit(engine);
      curves.push_back(generate_curve(omega, a, b, grid));
      truth.push_back(true_regression(curves.back()));
      const double eps = config.noise_variance > 0.0 ? noise(noise_engine) : 0.0;
      y.push_back(truth.back() + eps);
    }
    return FunctionalSample(grid, std::move(curves), std::move(y));
  };

  std::vector<double> train_truth, test_truth;
  auto train = draw(config.n_train, train_truth);
  auto test = draw(config.n_test, test_truth);
  return { std::move(train), std::move(test), std::move(train_truth), std::move(test_truth) };
}

void
ScalarDesignConfig::validate() const
{
  if (n < 2)
    throw Error(ErrorCode::TooFewPoints, "scalar design needs n >= 2");
  if (!(chi >= 0.0 && chi <= 1.0))
    throw Error(ErrorCode::DomainError, "chi must lie in the design support [0, 1]");
  if (!(h > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  if (!(noise_sd >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "noise_sd must be nonnegative");
  if (reps < 1)
    throw Error(ErrorCode::InvalidArgument, "reps must be positive");
}

double
ScalarDesignConfig::small_ball_probability() const
{
  return std::min(chi + h, 1.0) - std::max(chi - h, 0.0);
}

double
ScalarDesignConfig::phi_prime() const
{
  if (chi == 0.0)
    return slope;
  if (chi == 1.0)
    return -slope;
  return 0.0;
}

namespace {

// One replication of the scalar design: distances |X_i - chi| and responses.
struct ScalarDraw
{
  std::vector<double> distances;
  std::vector<double> responses;
};

ScalarDraw
draw_scalar(const ScalarDesignConfig& c, int rep)
{
  auto engine = rng::stream_engine(c.seed, static_cast<std::uint64_t>(rep));
  std::normal_distribution<double> noise(0.0, 1.0);
  ScalarDraw d;
  d.distances.resize(c.n);
  d.responses.resize(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    const double x = rng::uniform01(engine);
    d.distances[i] = std::abs(x - c.chi);
    d.responses[i] = c.slope * x + c.noise_sd * noise(engine);
  }
  return d;
}

BiasVarianceReport
scalar_theory(const ScalarDesignConfig& c, const KernelSpec& kernel)
{
  const auto constants = compute_constants(kernel, Tau0Model::fractal(1.0));
  return theoretical_bias_variance(c.phi_prime(), c.noise_sd * c.noise_sd, c.h, c.n,
                                   c.small_ball_probability(), constants);
}

} // namespace

BiasVarianceMcReport
mc_bias_variance(const ScalarDesignConfig& config, const KernelSpec& kernel)
{
  config.validate();
  const double truth = config.regression_at_chi();
  std::vector<double> estimates(static_cast<std::size_t>(config.reps));
  double neighbors = 0;
  for (int r = 0; r < config.reps; ++r) {
    const auto d = draw_scalar(config, r);
    const auto est = nadaraya_watson(d.distances, d.responses, kernel, config.h);
    estimates[static_cast<std::size_t>(r)] = est.prediction;
    neighbors += static_cast<double>(est.neighbor_count);
  }
  double mean = 0;
  for (double e : estimates)
    mean += e;
  mean /= config.reps;
  double var = 0;
  for (double e : estimates)
    var += (e - mean) * (e - mean);
  var = config.reps > 1 ? var / (config.reps - 1) : 0.0;

  return { mean - truth, var, neighbors / config.reps, scalar_theory(config, kernel),
           config.reps };
}

NormalityReport
mc_normality(const ScalarDesignConfig& config, const KernelSpec& kernel)
{
  config.validate();
  const auto theory = scalar_theory(config, kernel);
  const auto& m = theory.constants;
  const double sigma2 = config.noise_sd * config.noise_sd;
  const bool applicable = sigma2 > 0.0;
  const double scale = applicable ? m.m1 / std::sqrt(m.m2 * sigma2) : 1.0;
  const double truth = config.regression_at_chi();

  NormalityReport report;
  report.standardized.reserve(static_cast<std::size_t>(config.reps));
  for (int r = 0; r < config.reps; ++r) {
    const auto d = draw_scalar(config, r);
    const auto est = nadaraya_watson(d.distances, d.responses, kernel, config.h);
    const double root_nf = std::sqrt(static_cast<double>(est.neighbor_count));
    report.standardized.push_back(root_nf * (est.prediction - truth - theory.b_n) * scale);
  }
  report.ks_statistic = numerics::ks_distance_to_normal(report.standardized);
  report.critical_value_1pct = 1.63 / std::sqrt(static_cast<double>(config.reps));
  report.insufficient_replications = config.reps < min_normality_reps;
  report.applicable = applicable;
  return report;
}

CoverageReport
mc_coverage(const ScalarDesignConfig& config, const KernelSpec& kernel, double level)
{
  config.validate();
  const auto tau0 = Tau0Model::fractal(1.0);
  const double truth = config.regression_at_chi();
  int covered = 0;
  double width = 0;
  for (int r = 0; r < config.reps; ++r) {
    const auto d = draw_scalar(config, r);
    auto est = nadaraya_watson(d.distances, d.responses, kernel, config.h);
    est.sigma2_hat = estimate_sigma2(d.distances, d.responses, kernel, config.h);
    const auto ci = confidence_interval(est, kernel, tau0, level);
    if (ci.lower <= truth && truth <= ci.upper)
      ++covered;
    width += 0.5 * (ci.upper - ci.lower);
  }
  return { static_cast<double>(covered) / config.reps, width / config.reps, config.reps };
}

namespace {

// log F for the nonsmooth family, normalized so that log F(1) = 0.
double
nonsmooth_log_cdf(const family::Nonsmooth& f, double s)
{
  const auto log_g = [&](double x) { return -f.alpha * std::log(x) - f.c / std::pow(x, f.beta); };
  return log_g(s) - log_g(1.0);
}

double
invert_nonsmooth(const family::Nonsmooth& f, double u)
{
  if (u <= 0.0)
    return 0.0;
  const double target = std::log(u);
  // bracket on a log-spaced grid from 1e-12 to 1, then bisect
  constexpr int points = 241;
  double lo = 0.0;
  double hi = 1.0;
  for (int j = 0; j < points; ++j) {
    const double s = std::pow(10.0, -12.0 + 12.0 * j / (points - 1));
    if (nonsmooth_log_cdf(f, s) >= target) {
      hi = s;
      break;
    }
    lo = s;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid > 0.0 && nonsmooth_log_cdf(f, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double
sample_distance(const SmallBallFamily& family, double uniform_draw)
{
  if (const auto* f = std::get_if<family::Fractal>(&family)) {
    if (!(f->gamma > 0.0))
      throw Error(ErrorCode::InvalidArgument, "fractal family needs gamma > 0");
    return std::pow(uniform_draw, 1.0 / f->gamma);
  }
  const auto& f = std::get<family::Nonsmooth>(family);
  if (!(f.alpha > 0.0 && f.beta > 0.0 && f.c > 0.0))
    throw Error(ErrorCode::InvalidArgument, "nonsmooth family needs positive alpha, beta, C");
  if (!(f.c * f.beta > f.alpha))
    throw Error(ErrorCode::InvalidArgument,
                "nonsmooth family needs C beta > alpha to define a distribution on [0, 1]");
  return invert_nonsmooth(f, uniform_draw);
}

double
nonsmooth_bandwidth(double a, std::size_t n, double beta)
{
  if (n < 2 || !(beta > 0.0) || !(a > 0.0))
    throw Error(ErrorCode::InvalidArgument, "need n >= 2, beta > 0 and A > 0");
  return a / std::pow(std::log(static_cast<double>(n)), 1.0 / beta);
}

TauConvergenceReport
mc_tau_convergence(const SmallBallFamily& family,
                   std::size_t n,
                   double h,
                   std::vector<double> s_grid,
                   std::uint64_t seed)
{
  if (n < 1000)
    throw Error(ErrorCode::TooFewPoints, fmt::format("tau convergence needs n >= 1000, got {}", n));
  if (!(h > 0.0 && h <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "h must lie in (0, 1]");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = sample_distance(family, rng::counter_uniform(seed, 0, i));

  const auto tau0 = std::holds_alternative<family::Fractal>(family)
                      ? Tau0Model::fractal(std::get<family::Fractal>(family).gamma)
                      : Tau0Model::dirac_at_one();

  TauConvergenceReport report;
  report.in_ball = static_cast<std::size_t>(std::llround(empirical_sdf(d, h) * static_cast<double>(n)));
  report.sup_deviation = 0;
  for (double s : s_grid) {
    const double t_hat = empirical_tau(d, h, s);
    const double t0 = tau0(s);
    report.s.push_back(s);
    report.tau_hat.push_back(t_hat);
    report.tau0.push_back(t0);
    report.sup_deviation = std::max(report.sup_deviation, std::abs(t_hat - t0));
  }
  return report;
}

BootstrapExperimentRun
run_bootstrap_experiment_once(const BootstrapExperimentConfig& config, std::uint64_t seed)
{
  auto sim_config = config.simulation;
  sim_config.seed = seed;
  const auto data = generate_functional_sample(sim_config);

  const SemiMetric metric(data.train, config.metric);
  const auto sample_distances = metric.self_distances();
  DistanceMatrix query_distances;
  for (const auto& c : data.test.curves())
    query_distances.push_back(metric.distances_to(c));

  BootstrapConfig boot;
  boot.n_replications = config.n_replications;
  boot.pilot = config.pilot;
  boot.residual_rule = config.residual_rule;
  boot.k_min = config.k_min;
  boot.k_max = config.k_max;
  boot.seed = rng::stream_key(seed, 1);

  BootstrapExperimentRun run;
  run.bootstrap = bootstrap_error_curve(sample_distances, query_distances, false,
                                        data.train.responses(), config.kernel, boot);

  const auto n_k = run.bootstrap.per_bandwidth.size();
  run.true_error.assign(n_k, 0.0);
  for (std::size_t q = 0; q < query_distances.size(); ++q) {
    const auto grid = knn_bandwidths(query_distances[q], config.k_min, config.k_max);
    for (std::size_t j = 0; j < n_k; ++j) {
      const auto est = nadaraya_watson(query_distances[q], data.train.responses(), config.kernel,
                                       grid.entries[j].h);
      const double e = est.prediction - data.test_truth[q];
      run.true_error[j] += e * e;
    }
  }
  for (auto& e : run.true_error)
    e /= static_cast<double>(query_distances.size());

  const auto best = std::min_element(run.true_error.begin(), run.true_error.end());
  const auto oracle_j = static_cast<std::size_t>(best - run.true_error.begin());
  run.oracle_k = config.k_min + static_cast<int>(oracle_j);
  run.mse_oracle = *best;
  run.mse_selected =
    run.true_error[static_cast<std::size_t>(run.bootstrap.selected_k - config.k_min)];

  const auto& pb = run.bootstrap.per_bandwidth;
  double min_err = pb.front().mean_sq_boot_error;
  for (const auto& e : pb)
    min_err = std::min(min_err, e.mean_sq_boot_error);
  run.interior_minimum =
    pb.front().mean_sq_boot_error > min_err && pb.back().mean_sq_boot_error > min_err;
  return run;
}

std::vector<BootstrapExperimentRun>
run_bootstrap_experiment(const BootstrapExperimentConfig& config)
{
  if (config.runs < 1)
    throw Error(ErrorCode::InvalidArgument, "at least one experiment run is required");
  std::vector<BootstrapExperimentRun> runs;
  runs.reserve(static_cast<std::size_t>(config.runs));
  for (int j = 0; j < config.runs; ++j)
    runs.push_back(
      run_bootstrap_experiment_once(config, rng::stream_key(config.simulation.seed, 2, j)));
  return runs;
}

} // namespace funreg::sim
