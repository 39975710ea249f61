#include "funreg/error.hpp"
#include "funreg/kernels.hpp"
#include "funreg/numerics.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>

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

// Integration by parts turns M0, M1, M2 into Stieltjes integrals
// int s K(s) dtau0, int K dtau0, int K^2 dtau0, which for tau0 = s^g are
// ordinary integrals against g s^(g-1).
KernelConstants
stieltjes_oracle(const KernelSpec& k, double gamma)
{
  boost::math::quadrature::tanh_sinh<double> q;
  auto dens = [gamma](double s) { return gamma * std::pow(s, gamma - 1.0); };
  return { q.integrate([&](double s) { return s * k(s) * dens(s); }, 0.0, 1.0),
           q.integrate([&](double s) { return k(s) * dens(s); }, 0.0, 1.0),
           q.integrate([&](double s) { return k(s) * k(s) * dens(s); }, 0.0, 1.0) };
}

} // namespace

TEST_SUITE("kernels")
{
  TEST_CASE("eval_kernel: worked examples")
  {
    CHECK(eval_kernel(KernelSpec::quadratic(), 0.5) == doctest::Approx(0.75));
    CHECK(eval_kernel(KernelSpec::uniform(), 0.3) == 1.0);
    for (const auto& k : { KernelSpec::uniform(), KernelSpec::quadratic(), KernelSpec::triangle(),
                           KernelSpec::polynomial({ 2, -1 }) }) {
      CHECK(eval_kernel(k, 1.5) == 0.0);
      CHECK(eval_kernel(k, -0.1) == 0.0);
    }
    CHECK(KernelSpec::triangle()(0.25) == doctest::Approx(0.75));
    CHECK(KernelSpec::quadratic().derivative(0.5) == doctest::Approx(-1.0));
    CHECK(KernelSpec::uniform().at_one() == 1.0);
    CHECK(KernelSpec::quadratic().at_one() == 0.0);
    CHECK(KernelSpec::polynomial({ 1, 2 }).name() == "poly:1,2");
    CHECK(KernelSpec::quadratic().name() == "quadratic");
  }

  TEST_CASE("validate_kernel")
  {
    const auto u = validate_kernel(KernelSpec::uniform());
    CHECK(u.nonnegative);
    CHECK(u.monotone);
    CHECK(u.k1_positive);
    CHECK(u.h2_strict());

    const auto q = validate_kernel(KernelSpec::quadratic());
    CHECK(q.monotone);
    CHECK_FALSE(q.k1_positive);
    CHECK(q.k1 == 0.0);
    CHECK_FALSE(q.h2_strict());
    CHECK(q.describe().find("K(1)>0=FAIL") != std::string::npos);

    CHECK(validate_kernel(KernelSpec::polynomial({ 2, -1 })).h2_strict());
    CHECK(code_of([] { validate_kernel(KernelSpec::polynomial({ -1 })); }) ==
          ErrorCode::InvalidKernel);
    CHECK(code_of([] { validate_kernel(KernelSpec::polynomial({ 0.5, 0.5 })); }) ==
          ErrorCode::InvalidKernel);
    CHECK(code_of([] { KernelSpec::polynomial({}); }) == ErrorCode::InvalidKernel);
    CHECK(code_of([] { compute_constants(KernelSpec::polynomial({ 1, -2 }),
                                         Tau0Model::fractal(1)); }) == ErrorCode::InvalidKernel);
  }

  TEST_CASE("tau0 models")
  {
    CHECK(tau0_eval(Tau0Model::fractal(2), 0.5) == doctest::Approx(0.25));
    CHECK(tau0_eval(Tau0Model::dirac_at_one(), 0.999) == 0.0);
    CHECK(tau0_eval(Tau0Model::indicator_unit(), 0.0) == 0.0);
    CHECK(tau0_eval(Tau0Model::indicator_unit(), 1e-9) == 1.0);
    const auto emp = Tau0Model::empirical({ { 0, 0 }, { 0.5, 0.1 }, { 1, 1 } });
    CHECK(emp(0.25) == doctest::Approx(0.05));
    CHECK(emp(0.75) == doctest::Approx(0.55));
    for (const auto& m : { Tau0Model::fractal(0.5), Tau0Model::fractal(5), Tau0Model::dirac_at_one(),
                           Tau0Model::indicator_unit(), emp }) {
      CHECK(m(1.0) == 1.0);
      CHECK(code_of([&] { m(1.01); }) == ErrorCode::DomainError);
      CHECK(code_of([&] { m(-0.01); }) == ErrorCode::DomainError);
      double prev = -1;
      for (int i = 0; i <= 100; ++i) {
        const double v = m(i / 100.0);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
      }
    }
    CHECK(code_of([] { Tau0Model::fractal(0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { Tau0Model::empirical({ { 0, 0 }, { 1, 0.9 } }); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { Tau0Model::empirical({ { 0.1, 0 }, { 1, 1 } }); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { Tau0Model::empirical({ { 0, 0.5 }, { 0.5, 0.2 }, { 1, 1 } }); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("constants: spot values")
  {
    const auto u1 = compute_constants(KernelSpec::uniform(), Tau0Model::fractal(1));
    CHECK(u1.m0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u1.m1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u1.m2 == doctest::Approx(1.0).epsilon(1e-14));
    const auto q1 = compute_constants(KernelSpec::quadratic(), Tau0Model::fractal(1));
    CHECK(q1.m0 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(q1.m1 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(q1.m2 == doctest::Approx(8.0 / 15.0).epsilon(1e-14));
    const auto ud = compute_constants(KernelSpec::uniform(), Tau0Model::dirac_at_one());
    CHECK(ud.m0 == 1.0);
    CHECK(ud.m1 == 1.0);
    CHECK(ud.m2 == 1.0);
  }

  TEST_CASE("constants: quadratic kernel closed forms in gamma")
  {
    for (double g : { 0.5, 1.0, 2.0, 3.5, 5.0 }) {
      const auto c = compute_constants(KernelSpec::quadratic(), Tau0Model::fractal(g));
      CHECK(c.m0 == doctest::Approx(2 * g / ((g + 1) * (g + 3))).epsilon(1e-12));
      CHECK(c.m1 == doctest::Approx(2 / (g + 2)).epsilon(1e-12));
      CHECK(c.m2 == doctest::Approx(8 / ((g + 2) * (g + 4))).epsilon(1e-12));
    }
  }

  TEST_CASE("constants: independent Stieltjes quadrature oracle")
  {
    for (const auto& k : { KernelSpec::uniform(), KernelSpec::quadratic(), KernelSpec::triangle(),
                           KernelSpec::polynomial({ 1.5, -0.5, -0.25 }) }) {
      for (double g : { 0.5, 1.0, 2.0, 5.0 }) {
        const auto c = compute_constants(k, Tau0Model::fractal(g));
        const auto o = stieltjes_oracle(k, g);
        CHECK(std::abs(c.m0 - o.m0) < 1e-9);
        CHECK(std::abs(c.m1 - o.m1) < 1e-9);
        CHECK(std::abs(c.m2 - o.m2) < 1e-9);
      }
    }
  }

  TEST_CASE("constants: indicator, empirical and moment identities")
  {
    for (const auto& k : { KernelSpec::uniform(), KernelSpec::quadratic(), KernelSpec::triangle() }) {
      const auto ind = compute_constants(k, Tau0Model::indicator_unit());
      CHECK(std::abs(ind.m0) < 1e-9);
      CHECK(ind.m1 == doctest::Approx(k(0.0)).epsilon(1e-9));
      CHECK(ind.m2 == doctest::Approx(k(0.0) * k(0.0)).epsilon(1e-9));

      // tau0(s) = s tabulated: must reproduce the fractal gamma = 1 closed form
      const auto lin = compute_constants(k, Tau0Model::empirical({ { 0, 0 }, { 0.3, 0.3 }, { 1, 1 } }));
      const auto f1 = compute_constants(k, Tau0Model::fractal(1));
      CHECK(std::abs(lin.m0 - f1.m0) < 1e-9);
      CHECK(std::abs(lin.m1 - f1.m1) < 1e-9);
      CHECK(std::abs(lin.m2 - f1.m2) < 1e-9);

      // M1 >= 0 and Cauchy-Schwarz M1^2 <= M2 (both are integrals against dtau0)
      for (double g : { 0.5, 2.0 }) {
        const auto c = compute_constants(k, Tau0Model::fractal(g));
        CHECK(c.m1 > 0);
        CHECK(c.m1 * c.m1 <= c.m2 + 1e-14);
        CHECK(c.m0 <= c.m1 + 1e-14);
      }
    }
  }

  TEST_CASE("check_m0_positive: worked examples")
  {
    const auto a = check_m0_positive(KernelSpec::uniform(), Tau0Model::fractal(1));
    CHECK(a.positive);
    CHECK(a.applies == M0PositivityCase::smooth_tau0);
    const auto b = check_m0_positive(KernelSpec::uniform(), Tau0Model::indicator_unit());
    CHECK_FALSE(b.positive);
    CHECK(std::abs(b.m0) < 1e-9);
    const auto c = check_m0_positive(KernelSpec::quadratic(), Tau0Model::dirac_at_one());
    CHECK_FALSE(c.positive);
    CHECK(c.m0 == 0.0);
    const auto d = check_m0_positive(KernelSpec::uniform(), Tau0Model::dirac_at_one());
    CHECK(d.positive);
    CHECK(d.applies == M0PositivityCase::dirac_strict_kernel);
  }

  TEST_CASE("numerics")
  {
    CHECK(numerics::adaptive_simpson([](double x) { return std::exp(x); }, 0, 1) ==
          doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
    CHECK(numerics::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(numerics::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(code_of([] { numerics::normal_quantile(1.0); }) == ErrorCode::DomainError);
    CHECK(numerics::ks_distance_to_normal({ 0.0 }) == doctest::Approx(0.5));
  }
}
