#pragma once

#include <functional>
#include <vector>

namespace funreg::numerics {

//! Adaptive composite Simpson quadrature of f over [a, b] to an absolute
//! tolerance. Recursion depth is capped at `max_depth`.
double
adaptive_simpson(const std::function<double(double)>& f,
                 double a,
                 double b,
                 double abs_tol = 1e-10,
                 int max_depth = 50);

//! Standard normal quantile and distribution function.
double
normal_quantile(double p);
double
normal_cdf(double x);

//! Two-sided Kolmogorov-Smirnov distance between the empirical law of
//! `values` and the standard normal.
double
ks_distance_to_normal(std::vector<double> values);

} // namespace funreg::numerics
