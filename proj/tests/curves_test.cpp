#include "funreg/curves.hpp"
#include "funreg/error.hpp"
#include "funreg/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace funreg;

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

Curve
sampled(const GridPtr& g, auto&& f)
{
  std::vector<double> v;
  for (double t : g->points())
    v.push_back(f(t));
  return Curve(g, std::move(v));
}

GridPtr
random_grid(std::mt19937_64& rng, std::size_t m)
{
  std::uniform_real_distribution<double> step(0.05, 0.5);
  std::vector<double> t{ -1.0 };
  for (std::size_t i = 1; i < m; ++i)
    t.push_back(t.back() + step(rng));
  return make_grid(std::move(t));
}

} // namespace

TEST_SUITE("curves")
{
  TEST_CASE("grid validation")
  {
    CHECK(code_of([] { SamplingGrid({ 0.0 }); }) == ErrorCode::GridTooShort);
    CHECK(code_of([] { SamplingGrid({ 0.0, 1.0, 1.0 }); }) == ErrorCode::NonMonotoneGrid);
    CHECK(code_of([] { SamplingGrid({ 0.0, NAN }); }) == ErrorCode::InvalidArgument);
    const auto g = SamplingGrid::uniform(-1, 1, 101);
    CHECK(g.size() == 101);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
    CHECK(g[50] == doctest::Approx(0.0));
  }

  TEST_CASE("curve and sample validation")
  {
    const auto g = make_grid({ 0, 1, 2 });
    const auto other = make_grid({ 0, 1, 3 });
    CHECK(code_of([&] { Curve(g, { 1, 2 }); }) == ErrorCode::GridMismatch);
    CHECK(code_of([&] { Curve(g, { 1, INFINITY, 2 }); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { FunctionalSample(g, { Curve(other, { 0, 0, 0 }) }, { 1.0 }); }) ==
          ErrorCode::GridMismatch);
    CHECK(code_of([&] { FunctionalSample(g, { Curve(g, { 0, 0, 0 }) }, { 1.0, 2.0 }); }) ==
          ErrorCode::InvalidArgument);
    // an equal grid held by another pointer is the same grid
    const auto copy = make_grid({ 0, 1, 2 });
    FunctionalSample s(g, { Curve(copy, { 0, 1, 2 }), Curve(g, { 3, 4, 5 }) }, { 1.0, 2.0 });
    const std::vector<std::size_t> rows{ 1 };
    const auto sub = s.subset(rows);
    CHECK(sub.size() == 1);
    CHECK(sub.responses()[0] == 2.0);
    CHECK(sub.curves()[0][2] == 5.0);
  }

  TEST_CASE("differentiate: worked examples")
  {
    const auto g = make_grid({ 0, 1, 2 });
    const auto d = differentiate(Curve(g, { 0, 1, 2 }), 1);
    for (double v : d.values())
      CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    const auto z = differentiate(Curve(g, { 3, 3, 3 }), 1);
    for (double v : z.values())
      CHECK(v == 0.0);
    const auto sq = differentiate(Curve(make_grid({ 0, 0.5, 1.0 }), { 0, 0.25, 1.0 }), 1);
    CHECK(sq[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("differentiate: grid too short")
  {
    const auto g2 = make_grid({ 0, 1 });
    CHECK(code_of([&] { differentiate(Curve(g2, { 0, 1 }), 1); }) == ErrorCode::GridTooShort);
    const auto g4 = make_grid({ 0, 1, 2, 3 });
    CHECK(code_of([&] { differentiate(Curve(g4, { 0, 1, 2, 3 }), 2); }) ==
          ErrorCode::GridTooShort);
    CHECK(code_of([&] { differentiate(Curve(g4, { 0, 1, 2, 3 }), 3); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("differentiate: quadratics are exact on random non-uniform grids")
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-3, 3);
    for (int rep = 0; rep < 50; ++rep) {
      const auto g = random_grid(rng, 5 + static_cast<std::size_t>(rep % 7));
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      const auto f = sampled(g, [&](double t) { return a * t * t + b * t + c; });
      const auto d1 = differentiate(f, 1);
      const auto d2 = differentiate(f, 2);
      for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(d1[i] == doctest::Approx(2 * a * (*g)[i] + b).epsilon(1e-9));
        CHECK(d2[i] == doctest::Approx(2 * a).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("differentiate: convergence on a smooth curve")
  {
    double prev = 1e9;
    for (std::size_t m : { 21u, 41u, 81u, 161u }) {
      const auto g = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(-1, 1, m));
      const auto d = differentiate(sampled(g, [](double t) { return std::sin(3 * t); }), 1);
      double worst = 0;
      for (std::size_t i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(d[i] - 3 * std::cos(3 * (*g)[i])));
      CHECK(worst < prev / 3); // second order: error shrinks about 4x per halving
      prev = worst;
    }
  }

  TEST_CASE("moving average")
  {
    const auto g = make_grid({ 0, 1, 2, 3, 4 });
    const auto c = moving_average(Curve(g, { 2, 2, 2, 2, 2 }), 3);
    for (double v : c.values())
      CHECK(v == doctest::Approx(2.0));
    const auto m = moving_average(Curve(g, { 0, 3, 0, 3, 0 }), 3);
    CHECK(m[0] == doctest::Approx(1.5));
    CHECK(m[1] == doctest::Approx(1.0));
    CHECK(m[2] == doctest::Approx(2.0));
    CHECK(m[4] == doctest::Approx(1.5));
    CHECK(code_of([&] { moving_average(Curve(g, { 0, 0, 0, 0, 0 }), 4); }) ==
          ErrorCode::InvalidArgument);
    SemiMetricSpec bad{ .derivative_order = 3 };
    CHECK(code_of([&] { bad.validate(10); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("semi-metric distance: worked examples")
  {
    const auto g = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(0, 1, 11));
    const auto zero = sampled(g, [](double) { return 0.0; });
    const auto one = sampled(g, [](double) { return 1.0; });
    const auto wiggle = sampled(g, [](double t) { return std::sin(7 * t) + t * t; });
    for (int order : { 0, 1, 2 }) {
      const SemiMetricSpec spec{ .derivative_order = order };
      CHECK(semi_metric_distance(wiggle, wiggle, spec) == 0.0);
    }
    CHECK(semi_metric_distance(zero, one, {}) == doctest::Approx(1.0).epsilon(1e-14));

    const auto fine = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(0, 1, 1001));
    const double d = semi_metric_distance(sampled(fine, [](double t) { return t; }),
                                          sampled(fine, [](double) { return 0.0; }), {});
    CHECK(std::abs(d - std::sqrt(1.0 / 3.0)) < 1e-4);

    const auto other = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(0, 2, 11));
    CHECK(code_of([&] { semi_metric_distance(zero, sampled(other, [](double) { return 0.0; }), {}); }) ==
          ErrorCode::GridMismatch);
  }

  TEST_CASE("semi-metric: derivative orders ignore constant (and linear) shifts")
  {
    const auto g = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(-1, 1, 51));
    const auto a = sampled(g, [](double t) { return std::cos(2 * t); });
    const auto b = sampled(g, [](double t) { return std::cos(2 * t) + 5.0; });
    const auto c = sampled(g, [](double t) { return std::cos(2 * t) + 5.0 - 2.0 * t; });
    CHECK(semi_metric_distance(a, b, { .derivative_order = 0 }) > 1.0);
    CHECK(semi_metric_distance(a, b, { .derivative_order = 1 }) < 1e-12);
    CHECK(semi_metric_distance(a, c, { .derivative_order = 1 }) > 1.0);
    CHECK(semi_metric_distance(a, c, { .derivative_order = 2 }) < 1e-10);
  }

  TEST_CASE("pairwise distances: worked examples")
  {
    const auto g = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(0, 1, 5));
    auto level = [&](double c) { return sampled(g, [c](double) { return c; }); };
    FunctionalSample s(g, { level(0), level(1), level(2) }, { 0, 0, 0 });
    const auto d = pairwise_distances(s, level(0), {});
    REQUIRE(d.size() == 3);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(2.0));
    FunctionalSample single(g, { level(3) }, { 0 });
    CHECK(pairwise_distances(single, level(1), {}).size() == 1);
  }

  TEST_CASE("self distances: symmetric, zero diagonal, triangle inequality, matches pairwise")
  {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    const auto g = std::make_shared<const SamplingGrid>(SamplingGrid::uniform(-1, 1, 31));
    std::vector<Curve> curves;
    for (int i = 0; i < 12; ++i) {
      const double w = 6 * u(rng), a = u(rng), b = u(rng);
      curves.push_back(sampled(g, [&](double t) { return std::sin(w * t) + a * t + b; }));
    }
    FunctionalSample s(g, curves, std::vector<double>(curves.size(), 0.0));
    for (int order : { 0, 1, 2 }) {
      const SemiMetricSpec spec{ .derivative_order = order };
      const SemiMetric metric(s, spec);
      const auto d = metric.self_distances();
      for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d[i][i] == 0.0);
        const auto row = metric.distances_to(curves[i]);
        for (std::size_t j = 0; j < d.size(); ++j) {
          CHECK(d[i][j] == d[j][i]);
          CHECK(row[j] == doctest::Approx(d[i][j]).epsilon(1e-12));
          CHECK(d[i][j] ==
                doctest::Approx(semi_metric_distance(curves[i], curves[j], spec)).epsilon(1e-12));
          for (std::size_t k = 0; k < d.size(); ++k)
            CHECK(d[i][k] <= d[i][j] + d[j][k] + 1e-12);
        }
      }
    }
  }

  TEST_CASE("trapezoid weights integrate linear functions exactly")
  {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      const auto g = random_grid(rng, 3 + static_cast<std::size_t>(rep));
      const auto w = trapezoid_weights(*g);
      double s = 0, lin = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        s += w[i];
        lin += w[i] * (2 * (*g)[i] + 1);
      }
      const double lo = g->front(), hi = g->back();
      CHECK(s == doctest::Approx(hi - lo));
      CHECK(lin == doctest::Approx(hi * hi - lo * lo + hi - lo));
    }
  }
}
