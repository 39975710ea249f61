#include "funreg/kernels.hpp"

#include "funreg/error.hpp"
#include "funreg/numerics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace funreg {

namespace {

using Poly = std::vector<double>;

double
horner(const Poly& c, double u)
{
  double v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    v = v * u + *it;
  return v;
}

Poly
poly_derivative(const Poly& c)
{
  if (c.size() <= 1)
    return { 0.0 };
  Poly d(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j)
    d[j - 1] = static_cast<double>(j) * c[j];
  return d;
}

Poly
poly_product(const Poly& a, const Poly& b)
{
  Poly p(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      p[i + j] += a[i] * b[j];
  return p;
}

// (s K(s))'
Poly
s_times_derivative(const Poly& c)
{
  Poly d(c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    d[j] = static_cast<double>(j + 1) * c[j];
  return d;
}

// int_0^1 p(s) s^gamma ds, term by term
double
integrate_against_power(const Poly& p, double gamma)
{
  double s = 0;
  for (std::size_t j = 0; j < p.size(); ++j)
    s += p[j] / (static_cast<double>(j) + gamma + 1.0);
  return s;
}

} // namespace

KernelSpec::KernelSpec(KernelFamily family, std::vector<double> coefficients)
  : family_(family)
  , coefficients_(std::move(coefficients))
{}

KernelSpec
KernelSpec::uniform()
{
  return KernelSpec(KernelFamily::uniform, { 1.0 });
}

KernelSpec
KernelSpec::quadratic()
{
  return KernelSpec(KernelFamily::quadratic, { 1.0, 0.0, -1.0 });
}

KernelSpec
KernelSpec::triangle()
{
  return KernelSpec(KernelFamily::triangle, { 1.0, -1.0 });
}

KernelSpec
KernelSpec::polynomial(std::vector<double> coefficients)
{
  if (coefficients.empty())
    throw Error(ErrorCode::InvalidKernel, "polynomial kernel without coefficients");
  for (double c : coefficients)
    if (!std::isfinite(c))
      throw Error(ErrorCode::InvalidKernel, "polynomial kernel coefficient is not finite");
  return KernelSpec(KernelFamily::polynomial, std::move(coefficients));
}

double
KernelSpec::operator()(double u) const
{
  if (!(u >= 0.0 && u <= 1.0))
    return 0.0;
  return horner(coefficients_, u);
}

double
KernelSpec::derivative(double u) const
{
  return horner(poly_derivative(coefficients_), u);
}

double
KernelSpec::at_one() const
{
  return horner(coefficients_, 1.0);
}

std::string
KernelSpec::name() const
{
  switch (family_) {
    case KernelFamily::uniform:
      return "uniform";
    case KernelFamily::quadratic:
      return "quadratic";
    case KernelFamily::triangle:
      return "triangle";
    case KernelFamily::polynomial:
      return fmt::format("poly:{}", fmt::join(coefficients_, ","));
  }
  return "unknown";
}

double
eval_kernel(const KernelSpec& spec, double u)
{
  return spec(u);
}

std::string
KernelValidation::describe() const
{
  return fmt::format("nonnegative={} monotone={} K(1)>0={} (K(1)={})",
                     nonnegative ? "pass" : "FAIL",
                     monotone ? "pass" : "FAIL",
                     k1_positive ? "pass" : "FAIL",
                     k1);
}

KernelValidation
validate_kernel(const KernelSpec& spec)
{
  constexpr int check_points = 1024;
  constexpr double slack = 1e-12;

  KernelValidation report;
  double prev = spec(0.0);
  for (int i = 0; i < check_points; ++i) {
    const double u = static_cast<double>(i) / (check_points - 1);
    const double k = spec(u);
    if (k < -slack)
      report.nonnegative = false;
    if (i > 0 && k > prev + slack)
      report.monotone = false;
    prev = k;
  }
  report.k1 = spec.at_one();
  report.k1_positive = report.k1 > 0.0;

  if (!report.nonnegative)
    throw Error(ErrorCode::InvalidKernel,
                "kernel " + spec.name() + " takes negative values on [0,1]");
  if (!report.monotone)
    throw Error(ErrorCode::InvalidKernel,
                "kernel " + spec.name() + " is increasing somewhere on [0,1)");
  return report;
}

Tau0Model::Tau0Model(Variant model)
  : model_(std::move(model))
{}

Tau0Model
Tau0Model::fractal(double gamma)
{
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "fractal tau0 needs gamma > 0");
  return Tau0Model(tau0::Fractal{ gamma });
}

Tau0Model
Tau0Model::dirac_at_one()
{
  return Tau0Model(tau0::DiracAtOne{});
}

Tau0Model
Tau0Model::indicator_unit()
{
  return Tau0Model(tau0::IndicatorUnit{});
}

Tau0Model
Tau0Model::empirical(std::vector<std::pair<double, double>> table)
{
  if (table.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "empirical tau0 table needs at least 2 rows");
  if (table.front().first != 0.0 || table.back().first != 1.0)
    throw Error(ErrorCode::InvalidArgument, "empirical tau0 table must span s = 0 to s = 1");
  if (table.back().second != 1.0)
    throw Error(ErrorCode::InvalidArgument, "empirical tau0 table must end at tau0(1) = 1");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [s, v] = table[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("empirical tau0 value {} at row {} outside [0,1]", v, i));
    if (i > 0 && !(s > table[i - 1].first))
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("empirical tau0 abscissae not increasing at row {}", i));
    if (i > 0 && v < table[i - 1].second)
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("empirical tau0 values decrease at row {}", i));
  }
  return Tau0Model(tau0::Empirical{ std::move(table) });
}

std::string
Tau0Model::name() const
{
  struct Visitor
  {
    std::string operator()(const tau0::Fractal& f) const
    {
      return fmt::format("fractal:{}", f.gamma);
    }
    std::string operator()(const tau0::DiracAtOne&) const { return "dirac"; }
    std::string operator()(const tau0::IndicatorUnit&) const { return "indicator"; }
    std::string operator()(const tau0::Empirical& e) const
    {
      return fmt::format("empirical[{} rows]", e.table.size());
    }
  };
  return std::visit(Visitor{}, model_);
}

double
Tau0Model::operator()(double s) const
{
  if (!(s >= 0.0 && s <= 1.0))
    throw Error(ErrorCode::DomainError, fmt::format("tau0 evaluated at s = {} outside [0,1]", s));
  struct Visitor
  {
    double s;
    double operator()(const tau0::Fractal& f) const { return std::pow(s, f.gamma); }
    double operator()(const tau0::DiracAtOne&) const { return s < 1.0 ? 0.0 : 1.0; }
    double operator()(const tau0::IndicatorUnit&) const { return s > 0.0 ? 1.0 : 0.0; }
    double operator()(const tau0::Empirical& e) const
    {
      const auto& t = e.table;
      std::size_t i = 1;
      while (i + 1 < t.size() && t[i].first < s)
        ++i;
      const auto [s0, v0] = t[i - 1];
      const auto [s1, v1] = t[i];
      const double w = (s - s0) / (s1 - s0);
      return std::min(1.0, std::max(v0, v0 + w * (v1 - v0)));
    }
  };
  return std::visit(Visitor{ s }, model_);
}

double
tau0_eval(const Tau0Model& model, double s)
{
  return model(s);
}

KernelConstants
compute_constants(const KernelSpec& kernel, const Tau0Model& tau0)
{
  validate_kernel(kernel);

  const Poly& k = kernel.coefficients();
  const Poly sk_prime = s_times_derivative(k);
  const Poly k_prime = poly_derivative(k);
  const Poly k2 = poly_product(k, k);
  const Poly k2_prime = poly_derivative(k2);
  const double k1 = kernel.at_one();
  const double k1_sq = horner(k2, 1.0);

  if (const auto* f = std::get_if<tau0::Fractal>(&tau0.model())) {
    return { k1 - integrate_against_power(sk_prime, f->gamma),
             k1 - integrate_against_power(k_prime, f->gamma),
             k1_sq - integrate_against_power(k2_prime, f->gamma) };
  }
  if (std::holds_alternative<tau0::DiracAtOne>(tau0.model())) {
    // tau0 vanishes on [0,1): every integral is zero
    return { k1, k1, k1_sq };
  }

  // Integrate segment by segment so the quadrature never straddles a kink
  // of a piecewise-linear tau0.
  std::vector<double> breaks{ 0.0, 1.0 };
  if (const auto* e = std::get_if<tau0::Empirical>(&tau0.model())) {
    breaks.clear();
    for (const auto& row : e->table)
      breaks.push_back(row.first);
  }
  auto integrate = [&](const Poly& p) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      total += numerics::adaptive_simpson(
        [&](double s) { return horner(p, s) * tau0(s); }, breaks[i], breaks[i + 1], 1e-10);
    return total;
  };
  return { k1 - integrate(sk_prime), k1 - integrate(k_prime), k1_sq - integrate(k2_prime) };
}

M0Check
check_m0_positive(const KernelSpec& kernel, const Tau0Model& tau0)
{
  const auto c = compute_constants(kernel, tau0);
  M0Check out{ c.m0 > m0_positivity_threshold, c.m0, M0PositivityCase::numeric_only };
  if (std::holds_alternative<tau0::Fractal>(tau0.model()))
    out.applies = M0PositivityCase::smooth_tau0;
  else if (std::holds_alternative<tau0::DiracAtOne>(tau0.model()) && kernel.at_one() > 0.0)
    out.applies = M0PositivityCase::dirac_strict_kernel;
  return out;
}

} // namespace funreg
