#pragma once

#include "funreg/kernels.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace funreg {

//! kNN bandwidths: h_k is the radius of the smallest closed ball around the
//! query containing k sample curves.
struct BandwidthGrid
{
  struct Entry
  {
    int k;
    double h;
  };
  std::vector<Entry> entries; // ascending in k

  std::size_t size() const { return entries.size(); }
  double h_for(int k) const;
};

//! h_k for k in [k_min, k_max]. With `exclude_self` one zero distance (the
//! query's own entry when it belongs to the sample) is dropped before
//! ranking, so k counts the other curves.
BandwidthGrid
knn_bandwidths(std::span<const double> distances,
               int k_min,
               int k_max,
               bool exclude_self = false);

//! Single order statistic, same convention as knn_bandwidths.
double
knn_bandwidth(std::span<const double> distances, int k, bool exclude_self = false);

struct ConfidenceInterval
{
  double lower;
  double upper;
  double level;
};

struct EstimateResult
{
  double prediction;
  double g_hat;
  double f_hat;
  double f_hat_empirical;
  std::size_t neighbor_count;
  std::size_t sample_size;
  double bandwidth;
  std::optional<double> sigma2_hat;
  std::optional<ConfidenceInterval> ci;
};

//! Fraction of distances <= h.
double
empirical_sdf(std::span<const double> distances, double h);

//! F^(hs) / F^(h).
double
empirical_tau(std::span<const double> distances, double h, double s);

//! Functional Nadaraya-Watson estimate at the query whose distances to the
//! sample are given:
//!   r^ = sum Y_k K(d_k/h) / sum K(d_k/h) = g^ / f^,
//! with g^ and f^ both normalized by n F^(h).
//! Throws EmptyNeighborhood when no observation gets positive weight.
EstimateResult
nadaraya_watson(std::span<const double> distances,
                std::span<const double> responses,
                const KernelSpec& kernel,
                double h);

//! Plug-in conditional variance E(Y^2|X) - E(Y|X)^2, clamped at 0.
double
estimate_sigma2(std::span<const double> distances,
                std::span<const double> responses,
                const KernelSpec& kernel,
                double h);

//! Asymptotic interval r^ +- z sqrt(M2 sigma2^ / (n F^(h) M1^2)), bias not
//! corrected. Needs a kernel with K(1) > 0.
ConfidenceInterval
confidence_interval(const EstimateResult& result,
                    const KernelSpec& kernel,
                    const Tau0Model& tau0,
                    double level);

struct BiasVarianceReport
{
  double b_n;
  double variance_leading;
  KernelConstants constants;
  double phi_prime;
  double sigma2;
  double h;
  std::size_t n;
  double f_of_h;
};

//! Leading bias phi'(0) (M0/M1) h and variance (M2/M1^2) sigma^2 / (n F(h)).
BiasVarianceReport
theoretical_bias_variance(double phi_prime,
                          double sigma2,
                          double h,
                          std::size_t n,
                          double f_of_h,
                          const KernelConstants& constants);

//! Diagnostic estimate of phi'(0): kernel-weighted least-squares slope of
//! the responses against the distance, over the points within h_pilot.
double
estimate_phi_prime(std::span<const double> distances,
                   std::span<const double> responses,
                   const KernelSpec& kernel,
                   double h_pilot);

} // namespace funreg
