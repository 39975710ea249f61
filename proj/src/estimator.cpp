#include "funreg/estimator.hpp"

#include "funreg/error.hpp"
#include "funreg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace funreg {

namespace {

void
check_lengths(std::span<const double> distances, std::span<const double> responses)
{
  if (distances.size() != responses.size())
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} distances but {} responses", distances.size(),
                            responses.size()));
  if (distances.empty())
    throw Error(ErrorCode::TooFewPoints, "no observations");
}

void
check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::InvalidArgument, fmt::format("bandwidth must be positive, got {}", h));
}

std::vector<double>
ranked_distances(std::span<const double> distances, bool exclude_self)
{
  std::vector<double> d(distances.begin(), distances.end());
  for (double x : d)
    if (!(x >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "distances must be nonnegative");
  std::sort(d.begin(), d.end());
  if (exclude_self) {
    if (d.empty() || d.front() != 0.0)
      throw Error(ErrorCode::InvalidArgument,
                  "exclude_self requested but the query is not in the sample");
    d.erase(d.begin());
  }
  return d;
}

struct WeightedSums
{
  double sum_w = 0;
  double sum_wy = 0;
  double sum_wy2 = 0;
  std::size_t in_ball = 0;
};

WeightedSums
weighted_sums(std::span<const double> distances,
              std::span<const double> responses,
              const KernelSpec& kernel,
              double h)
{
  WeightedSums s;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    if (d > h)
      continue;
    ++s.in_ball;
    const double w = kernel(d / h);
    const double y = responses[i];
    s.sum_w += w;
    s.sum_wy += w * y;
    s.sum_wy2 += w * y * y;
  }
  return s;
}

} // namespace

double
BandwidthGrid::h_for(int k) const
{
  for (const auto& e : entries)
    if (e.k == k)
      return e.h;
  throw Error(ErrorCode::InvalidArgument, fmt::format("k = {} is not in the bandwidth grid", k));
}

BandwidthGrid
knn_bandwidths(std::span<const double> distances, int k_min, int k_max, bool exclude_self)
{
  const auto n = static_cast<int>(distances.size());
  if (k_min < 2 || k_max < k_min || k_max > n - 1)
    throw Error(ErrorCode::TooFewPoints,
                fmt::format("kNN grid needs 2 <= k_min <= k_max <= n-1, got k in [{}, {}] "
                            "with n = {}",
                            k_min, k_max, n));
  const auto d = ranked_distances(distances, exclude_self);
  if (static_cast<int>(d.size()) < k_max)
    throw Error(ErrorCode::TooFewPoints,
                fmt::format("only {} candidate neighbours for k_max = {}", d.size(), k_max));

  BandwidthGrid grid;
  grid.entries.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    const double h = d[static_cast<std::size_t>(k - 1)];
    if (!(h > 0.0))
      throw Error(ErrorCode::DegenerateBall,
                  fmt::format("the {}-th nearest curve is at distance 0", k));
    grid.entries.push_back({ k, h });
  }
  return grid;
}

double
knn_bandwidth(std::span<const double> distances, int k, bool exclude_self)
{
  return knn_bandwidths(distances, k, k, exclude_self).entries.front().h;
}

double
empirical_sdf(std::span<const double> distances, double h)
{
  if (distances.empty())
    throw Error(ErrorCode::TooFewPoints, "no distances");
  const auto count = std::count_if(distances.begin(), distances.end(),
                                   [h](double d) { return d <= h; });
  return static_cast<double>(count) / static_cast<double>(distances.size());
}

double
empirical_tau(std::span<const double> distances, double h, double s)
{
  if (!(s >= 0.0 && s <= 1.0))
    throw Error(ErrorCode::DomainError, fmt::format("s = {} outside [0,1]", s));
  const double f_h = empirical_sdf(distances, h);
  if (f_h <= 0.0)
    throw Error(ErrorCode::DegenerateBall,
                fmt::format("no observation within h = {} of the query", h));
  return empirical_sdf(distances, h * s) / f_h;
}

EstimateResult
nadaraya_watson(std::span<const double> distances,
                std::span<const double> responses,
                const KernelSpec& kernel,
                double h)
{
  check_lengths(distances, responses);
  check_bandwidth(h);
  const auto s = weighted_sums(distances, responses, kernel, h);
  if (!(s.sum_w > 0.0))
    throw Error(ErrorCode::EmptyNeighborhood,
                fmt::format("no observation receives positive weight at h = {}", h));

  const auto n = distances.size();
  const double nf = static_cast<double>(s.in_ball);
  EstimateResult r{};
  r.prediction = s.sum_wy / s.sum_w;
  r.g_hat = s.sum_wy / nf;
  r.f_hat = s.sum_w / nf;
  r.f_hat_empirical = nf / static_cast<double>(n);
  r.neighbor_count = s.in_ball;
  r.sample_size = n;
  r.bandwidth = h;
  return r;
}

double
estimate_sigma2(std::span<const double> distances,
                std::span<const double> responses,
                const KernelSpec& kernel,
                double h)
{
  check_lengths(distances, responses);
  check_bandwidth(h);
  const auto s = weighted_sums(distances, responses, kernel, h);
  if (!(s.sum_w > 0.0))
    throw Error(ErrorCode::EmptyNeighborhood,
                fmt::format("no observation receives positive weight at h = {}", h));
  const double mean = s.sum_wy / s.sum_w;
  return std::max(0.0, s.sum_wy2 / s.sum_w - mean * mean);
}

ConfidenceInterval
confidence_interval(const EstimateResult& result,
                    const KernelSpec& kernel,
                    const Tau0Model& tau0,
                    double level)
{
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::DomainError, fmt::format("confidence level {} outside (0,1)", level));
  if (!result.sigma2_hat)
    throw Error(ErrorCode::MissingSigma2, "estimate carries no conditional variance");
  const auto validation = validate_kernel(kernel);
  if (!validation.k1_positive)
    throw Error(ErrorCode::KernelNotH2Strict,
                fmt::format("kernel {} has K(1) = {}; intervals need K(1) > 0",
                            kernel.name(), validation.k1));
  if (result.neighbor_count == 0)
    throw Error(ErrorCode::DegenerateBall, "empty ball around the query");

  const auto c = compute_constants(kernel, tau0);
  if (!(c.m1 > 0.0))
    throw Error(ErrorCode::DegenerateConstants, fmt::format("M1 = {} is not positive", c.m1));
  const double nf = static_cast<double>(result.neighbor_count);
  const double z = numerics::normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(c.m2 * *result.sigma2_hat / (nf * c.m1 * c.m1));
  return { result.prediction - half, result.prediction + half, level };
}

BiasVarianceReport
theoretical_bias_variance(double phi_prime,
                          double sigma2,
                          double h,
                          std::size_t n,
                          double f_of_h,
                          const KernelConstants& constants)
{
  if (!(constants.m1 > 0.0))
    throw Error(ErrorCode::DegenerateConstants,
                fmt::format("M1 = {} is not positive", constants.m1));
  if (!(sigma2 >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma2 must be nonnegative");
  check_bandwidth(h);
  if (n == 0 || !(f_of_h > 0.0 && f_of_h <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "need n >= 1 and F(h) in (0,1]");

  BiasVarianceReport r{};
  r.b_n = phi_prime * (constants.m0 / constants.m1) * h;
  r.variance_leading = (constants.m2 / (constants.m1 * constants.m1)) * sigma2 /
                       (static_cast<double>(n) * f_of_h);
  r.constants = constants;
  r.phi_prime = phi_prime;
  r.sigma2 = sigma2;
  r.h = h;
  r.n = n;
  r.f_of_h = f_of_h;
  return r;
}

double
estimate_phi_prime(std::span<const double> distances,
                   std::span<const double> responses,
                   const KernelSpec& kernel,
                   double h_pilot)
{
  check_lengths(distances, responses);
  check_bandwidth(h_pilot);

  constexpr std::size_t min_points = 10;
  std::size_t count = 0;
  double sw = 0, sd = 0, sy = 0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] > h_pilot)
      continue;
    ++count;
    const double w = kernel(distances[i] / h_pilot);
    sw += w;
    sd += w * distances[i];
    sy += w * responses[i];
  }
  if (count < min_points || !(sw > 0.0))
    throw Error(ErrorCode::TooFewPoints,
                fmt::format("{} points within h_pilot = {}, need {}", count, h_pilot,
                            min_points));
  const double dbar = sd / sw;
  const double ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] > h_pilot)
      continue;
    const double w = kernel(distances[i] / h_pilot);
    const double dx = distances[i] - dbar;
    sxx += w * dx * dx;
    sxy += w * dx * (responses[i] - ybar);
  }
  if (!(sxx > 0.0))
    throw Error(ErrorCode::TooFewPoints, "all pilot distances coincide");
  return sxy / sxx;
}

} // namespace funreg
