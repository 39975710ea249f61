#include "funreg/error.hpp"
#include "funreg/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace funreg;
using std::numbers::pi;

namespace {

ErrorCode
code_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no funreg::Error thrown");
  return ErrorCode::InvalidArgument;
}

GridPtr
unit_grid(std::size_t m)
{
  return std::make_shared<const SamplingGrid>(SamplingGrid::uniform(-1, 1, m));
}

} // namespace

TEST_SUITE("simulation")
{
  TEST_CASE("generate_curve: worked examples")
  {
    const auto g = unit_grid(5); // -1, -0.5, 0, 0.5, 1
    const auto lin = sim::generate_curve(0, 0, 0, g);
    for (std::size_t i = 0; i < g->size(); ++i)
      CHECK(lin[i] == doctest::Approx(2 * pi * (*g)[i]));
    CHECK(sim::generate_curve(0, 0, 1, g)[2] == doctest::Approx(1.0));
    CHECK(sim::generate_curve(pi, 0.5, 0.25, g)[3] == doctest::Approx(4.6416).epsilon(1e-4));
    const auto off = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(0, 1, 5));
    CHECK(code_of([&] { sim::generate_curve(1, 0, 0, off); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("true_regression: worked examples")
  {
    const auto g = unit_grid(101);
    std::vector<double> up, down, flat;
    for (double t : g->points()) {
      up.push_back(2 * pi * t);
      down.push_back(-2 * pi * t);
      flat.push_back(1.5);
    }
    CHECK(std::abs(sim::true_regression(Curve(g, up)) - 4 * pi) < 0.02);
    CHECK(std::abs(sim::true_regression(Curve(g, down)) - 4 * pi) < 0.02);
    CHECK(sim::true_regression(Curve(g, flat)) == 0.0);
    const auto tiny = unit_grid(3);
    CHECK(code_of([&] { sim::true_regression(Curve(tiny, { 0, 0, 0 })); }) ==
          ErrorCode::GridTooShort);
  }

  TEST_CASE("generate_functional_sample")
  {
    sim::SimulationConfig c;
    c.seed = 5;
    c.noise_variance = 0;
    const auto a = sim::generate_functional_sample(c);
    CHECK(a.train.size() == 100);
    CHECK(a.test.size() == 50);
    for (std::size_t i = 0; i < a.train.size(); ++i) {
      CHECK(a.train.responses()[i] == a.train_truth[i]);
      CHECK(a.train_truth[i] == sim::true_regression(a.train.curves()[i]));
    }

    sim::SimulationConfig d;
    d.seed = 5;
    const auto x = sim::generate_functional_sample(d);
    const auto y = sim::generate_functional_sample(d);
    for (std::size_t i = 0; i < x.train.size(); ++i) {
      CHECK(x.train.responses()[i] == y.train.responses()[i]);
      for (std::size_t j = 0; j < x.train.grid().size(); ++j)
        CHECK(x.train.curves()[i][j] == y.train.curves()[i][j]);
    }
    const auto r = x.train.responses();
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    double var = 0;
    for (double v : r)
      var += (v - mean) * (v - mean);
    CHECK(var / static_cast<double>(r.size() - 1) > 2.0);

    // noiseless curves do not depend on the noise level
    for (std::size_t i = 0; i < x.train.size(); ++i)
      CHECK(x.train_truth[i] == a.train_truth[i]);

    sim::SimulationConfig bad;
    bad.grid_size = 3;
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::GridTooShort);
    bad = {};
    bad.noise_variance = -1;
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("scalar design quantities")
  {
    sim::ScalarDesignConfig c;
    CHECK(c.small_ball_probability() == doctest::Approx(0.1));
    CHECK(c.phi_prime() == 1.0);
    c.chi = 0.5;
    CHECK(c.small_ball_probability() == doctest::Approx(0.2));
    CHECK(c.phi_prime() == 0.0);
    c.chi = 1.0;
    CHECK(c.phi_prime() == -1.0);
    c.chi = 1.5;
    CHECK(code_of([&] { c.validate(); }) == ErrorCode::DomainError);
  }

  TEST_CASE("mc_bias_variance: reduced scale")
  {
    sim::ScalarDesignConfig c;
    c.reps = 400;
    c.seed = 3;
    const auto boundary = sim::mc_bias_variance(c, KernelSpec::uniform());
    CHECK(boundary.theory.b_n == doctest::Approx(0.05));
    CHECK(boundary.theory.variance_leading == doctest::Approx(0.00125));
    CHECK(std::abs(boundary.empirical_bias - 0.05) < 0.01);
    CHECK(boundary.mean_neighbors == doctest::Approx(200).epsilon(0.05));

    auto interior = c;
    interior.chi = 0.5;
    const auto mid = sim::mc_bias_variance(interior, KernelSpec::uniform());
    CHECK(std::abs(mid.empirical_bias) * 5 < std::abs(boundary.empirical_bias));

    auto quiet = c;
    quiet.noise_sd = 0;
    const auto q = sim::mc_bias_variance(quiet, KernelSpec::uniform());
    CHECK(q.theory.variance_leading == 0.0);
    CHECK(q.empirical_variance < 2 * 0.05 * 0.05);

    const auto again = sim::mc_bias_variance(c, KernelSpec::uniform());
    CHECK(again.empirical_bias == boundary.empirical_bias);
    CHECK(again.empirical_variance == boundary.empirical_variance);
  }

  TEST_CASE("mc_normality: degenerate inputs")
  {
    sim::ScalarDesignConfig c;
    c.h = 0.05;
    c.reps = 1;
    const auto one = sim::mc_normality(c, KernelSpec::uniform());
    CHECK(one.insufficient_replications);
    CHECK(one.ks_statistic >= 0.0);
    CHECK(one.ks_statistic <= 1.0);

    c.reps = 50;
    c.noise_sd = 0;
    const auto quiet = sim::mc_normality(c, KernelSpec::uniform());
    CHECK_FALSE(quiet.applicable);
    CHECK_FALSE(quiet.insufficient_replications);
  }

  TEST_CASE("mc_coverage: reduced scale")
  {
    sim::ScalarDesignConfig c;
    c.chi = 0.5;
    c.h = 0.05;
    c.reps = 200;
    c.seed = 8;
    const auto r = sim::mc_coverage(c, KernelSpec::uniform(), 0.95);
    CHECK(r.coverage > 0.88);
    CHECK(r.coverage <= 1.0);
    CHECK(r.mean_half_width > 0.0);
    CHECK(code_of([&] { sim::mc_coverage(c, KernelSpec::quadratic(), 0.95); }) ==
          ErrorCode::KernelNotH2Strict);
  }

  TEST_CASE("small-ball families")
  {
    const sim::SmallBallFamily f2 = sim::family::Fractal{ 2.0 };
    CHECK(sim::sample_distance(f2, 0.25) == doctest::Approx(0.5));
    const sim::SmallBallFamily ns = sim::family::Nonsmooth{ 1, 2, 1 };
    double prev = 0;
    for (double u : { 0.01, 0.1, 0.5, 0.9, 0.999 }) {
      const double s = sim::sample_distance(ns, u);
      CHECK(s > prev);
      CHECK(s <= 1.0);
      // F(s) / F(1) = s^-1 exp(1 - s^-2)
      CHECK(std::exp(1.0 - 1.0 / (s * s)) / s == doctest::Approx(u).epsilon(1e-6));
      prev = s;
    }
    const sim::SmallBallFamily bad = sim::family::Nonsmooth{ 3, 1, 1 };
    CHECK(code_of([&] { sim::sample_distance(bad, 0.5); }) == ErrorCode::InvalidArgument);
    CHECK(sim::nonsmooth_bandwidth(1.5, 5000, 2) ==
          doctest::Approx(1.5 / std::sqrt(std::log(5000.0))));
  }

  TEST_CASE("mc_tau_convergence")
  {
    const std::vector<double> s{ 0, 0.25, 0.5, 0.75, 1 };
    const auto r = sim::mc_tau_convergence(sim::family::Fractal{ 1 }, 5000, 0.1, s, 1);
    CHECK(r.tau_hat.back() == 1.0);
    CHECK(r.tau0.back() == 1.0);
    CHECK(r.sup_deviation <= 0.1);
    CHECK(r.in_ball > 300);
    CHECK(code_of([&] { sim::mc_tau_convergence(sim::family::Fractal{ 1 }, 100, 0.1, s, 1); }) ==
          ErrorCode::TooFewPoints);
    CHECK(code_of([&] { sim::mc_tau_convergence(sim::family::Fractal{ 1 }, 1000, 1e-9, s, 1); }) ==
          ErrorCode::DegenerateBall);
  }
}
