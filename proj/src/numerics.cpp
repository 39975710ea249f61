#include "funreg/numerics.hpp"

#include "funreg/error.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

namespace funreg::numerics {

namespace {

double
simpson_step(const std::function<double(double)>& f,
             double a,
             double fa,
             double m,
             double fm,
             double b,
             double fb,
             double whole,
             double tol,
             int depth)
{
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double
adaptive_simpson(const std::function<double(double)>& f,
                 double a,
                 double b,
                 double abs_tol,
                 int max_depth)
{
  if (a == b)
    return 0.0;
  // eight initial panels before any refinement
  constexpr int panels = 8;
  const double width = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double hi = p + 1 == panels ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_step(f, lo, flo, mid, fmid, hi, fhi, whole, abs_tol / panels,
                          max_depth);
  }
  return total;
}

double
normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::DomainError, "normal quantile needs p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double
normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double
ks_distance_to_normal(std::vector<double> values)
{
  if (values.empty())
    throw Error(ErrorCode::TooFewPoints, "KS distance of an empty sample");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = normal_cdf(values[i]);
    d = std::max({ d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n });
  }
  return d;
}

} // namespace funreg::numerics
