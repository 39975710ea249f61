#pragma once

#include "funreg/bootstrap.hpp"
#include "funreg/curves.hpp"
#include "funreg/estimator.hpp"
#include "funreg/kernels.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace funreg::sim {

//! Random curves X(t) = sin(w t) + (a + 2 pi) t + b on [-1, 1], with
//! w ~ U(0, 2 pi), a, b ~ U(0, 1), and Y = r(X) + N(0, noise_variance).
struct SimulationConfig
{
  std::size_t n_train = 100;
  std::size_t n_test = 50;
  std::size_t grid_size = 101;
  double noise_variance = 2.0;
  std::uint64_t seed = 0;
  int monte_carlo_reps = 100;

  void validate() const;
};

Curve
generate_curve(double omega, double a, double b, const GridPtr& grid);

//! r(X) = int_{-1}^{1} |X'(t)| (1 - cos(pi t)) dt by trapezoid quadrature
//! of the finite-difference derivative.
double
true_regression(const Curve& curve);

struct SimulatedSamples
{
  FunctionalSample train;
  FunctionalSample test;
  std::vector<double> train_truth; // r(X_i) without noise
  std::vector<double> test_truth;
};

SimulatedSamples
generate_functional_sample(const SimulationConfig& config);

//! Scalar design X ~ U(0,1), Y = slope X + N(0, noise_sd^2), estimated at
//! chi with a fixed bandwidth. Finite-dimensional special case: F(h) is the
//! length of [chi - h, chi + h] within [0, 1] and tau0(s) = s.
struct ScalarDesignConfig
{
  std::size_t n = 2000;
  double chi = 0.0;
  double h = 0.1;
  double slope = 1.0;
  double noise_sd = 0.5;
  int reps = 5000;
  std::uint64_t seed = 0;

  void validate() const;
  double regression_at_chi() const { return slope * chi; }
  double small_ball_probability() const;
  //! phi'(0): +slope at chi = 0, -slope at chi = 1, 0 inside.
  double phi_prime() const;
};

struct BiasVarianceMcReport
{
  double empirical_bias;
  double empirical_variance;
  double mean_neighbors;
  BiasVarianceReport theory;
  int reps;
};

BiasVarianceMcReport
mc_bias_variance(const ScalarDesignConfig& config, const KernelSpec& kernel);

inline constexpr int min_normality_reps = 30;

struct NormalityReport
{
  std::vector<double> standardized;
  double ks_statistic;
  double critical_value_1pct; // 1.63 / sqrt(reps)
  bool insufficient_replications;
  bool applicable; // false when sigma^2 = 0 and nothing can be standardized
};

//! sqrt(n F^(h)) (r^ - r(chi) - B_n) M1 / sqrt(M2 sigma^2) per replication,
//! and its KS distance to N(0,1).
NormalityReport
mc_normality(const ScalarDesignConfig& config, const KernelSpec& kernel);

struct CoverageReport
{
  double coverage;
  double mean_half_width;
  int reps;
};

//! Empirical coverage of the plug-in interval (sigma^2 and F(h) estimated).
CoverageReport
mc_coverage(const ScalarDesignConfig& config, const KernelSpec& kernel, double level);

namespace family {

struct Fractal
{
  double gamma;
};
//! F(s) proportional to s^-alpha exp(-C / s^beta) on (0, 1]; needs
//! C beta > alpha so that F increases on the whole interval.
struct Nonsmooth
{
  double alpha;
  double beta;
  double c;
};

} // namespace family

using SmallBallFamily = std::variant<family::Fractal, family::Nonsmooth>;

//! Inverse-CDF draw of a distance from the family's law on [0, 1].
double
sample_distance(const SmallBallFamily& family, double uniform_draw);

//! h = A / (log n)^(1/beta).
double
nonsmooth_bandwidth(double a, std::size_t n, double beta);

struct TauConvergenceReport
{
  std::vector<double> s;
  std::vector<double> tau_hat;
  std::vector<double> tau0;
  double sup_deviation;
  std::size_t in_ball;
};

TauConvergenceReport
mc_tau_convergence(const SmallBallFamily& family,
                   std::size_t n,
                   double h,
                   std::vector<double> s_grid,
                   std::uint64_t seed);

//! Reduced-scale run of the bandwidth-selection experiment on simulated
//! curves: bootstrap error curve on the test queries, and the true test
//! error of every candidate k.
struct BootstrapExperimentConfig
{
  SimulationConfig simulation{ .n_train = 100, .n_test = 10 };
  int n_replications = 100;
  int k_min = 2;
  int k_max = 32;
  PilotRule pilot = PilotRule::cross_validation();
  ResidualRule residual_rule = ResidualRule::pilot;
  KernelSpec kernel = KernelSpec::quadratic();
  SemiMetricSpec metric{ .derivative_order = 1 };
  int runs = 20;
};

struct BootstrapExperimentRun
{
  WildBootstrapResult bootstrap;
  std::vector<double> true_error; // per candidate k, averaged over test curves
  int oracle_k;
  double mse_selected;
  double mse_oracle;
  bool interior_minimum;
};

BootstrapExperimentRun
run_bootstrap_experiment_once(const BootstrapExperimentConfig& config, std::uint64_t seed);

std::vector<BootstrapExperimentRun>
run_bootstrap_experiment(const BootstrapExperimentConfig& config);

} // namespace funreg::sim
