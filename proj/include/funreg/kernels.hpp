#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace funreg {

enum class KernelFamily
{
  uniform,    // K(u) = 1
  quadratic,  // K(u) = 1 - u^2
  triangle,   // K(u) = 1 - u
  polynomial, // K(u) = sum_j c_j u^j
};

//! Kernel supported on [0,1]. Every family is stored as its polynomial
//! coefficients, so derivatives and integrals have closed forms.
class KernelSpec
{
public:
  static KernelSpec uniform();
  static KernelSpec quadratic();
  static KernelSpec triangle();
  static KernelSpec polynomial(std::vector<double> coefficients);

  KernelFamily family() const { return family_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  //! K(u) on [0,1], 0 elsewhere.
  double operator()(double u) const;
  //! K'(u) on [0,1].
  double derivative(double u) const;
  double at_one() const;

  std::string name() const;

private:
  KernelSpec(KernelFamily family, std::vector<double> coefficients);

  KernelFamily family_;
  std::vector<double> coefficients_;
};

double
eval_kernel(const KernelSpec& spec, double u);

//! Per-clause outcome of the kernel assumptions: support [0,1], K >= 0,
//! K' <= 0 on [0,1) and K(1) > 0.
struct KernelValidation
{
  bool nonnegative = true;
  bool monotone = true;
  bool k1_positive = true;
  double k1 = 0.0;

  bool h2_strict() const { return nonnegative && monotone && k1_positive; }
  std::string describe() const;
};

//! Checks every clause on a 1024-point grid. Throws InvalidKernel only when
//! K is negative or increasing somewhere; a vanishing K(1) is reported.
KernelValidation
validate_kernel(const KernelSpec& spec);

namespace tau0 {

struct Fractal
{
  double gamma;
};
struct DiracAtOne
{};
struct IndicatorUnit
{};
struct Empirical
{
  std::vector<std::pair<double, double>> table; // (s, tau0(s))
};

} // namespace tau0

//! Limit of tau_h(s) = F(hs) / F(h) as h -> 0.
class Tau0Model
{
public:
  using Variant =
    std::variant<tau0::Fractal, tau0::DiracAtOne, tau0::IndicatorUnit, tau0::Empirical>;

  static Tau0Model fractal(double gamma);
  static Tau0Model dirac_at_one();
  static Tau0Model indicator_unit();
  static Tau0Model empirical(std::vector<std::pair<double, double>> table);

  const Variant& model() const { return model_; }
  std::string name() const;

  double operator()(double s) const;

private:
  explicit Tau0Model(Variant model);
  Variant model_;
};

double
tau0_eval(const Tau0Model& model, double s);

struct KernelConstants
{
  double m0;
  double m1;
  double m2;
};

//! M0 = K(1) - int (sK(s))' tau0(s) ds,
//! M1 = K(1) - int K'(s) tau0(s) ds,
//! M2 = K(1)^2 - int (K^2)'(s) tau0(s) ds.
KernelConstants
compute_constants(const KernelSpec& kernel, const Tau0Model& tau0);

enum class M0PositivityCase
{
  smooth_tau0,       // tau0 continuously differentiable and not the indicator
  dirac_strict_kernel, // tau0 = delta_1 and K(1) > 0
  numeric_only,
};

struct M0Check
{
  bool positive;
  double m0;
  M0PositivityCase applies;
};

inline constexpr double m0_positivity_threshold = 1e-12;

M0Check
check_m0_positive(const KernelSpec& kernel, const Tau0Model& tau0);

} // namespace funreg
