#include "funreg/bootstrap.hpp"

#include "funreg/error.hpp"
#include "funreg/estimator.hpp"
#include "funreg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <set>

namespace funreg {

WildResidualLaw
WildResidualLaw::for_residual(double residual)
{
  const double root5 = std::sqrt(5.0);
  return { residual * (1.0 - root5) / 2.0, residual * (1.0 + root5) / 2.0,
           (5.0 + root5) / 10.0, (5.0 - root5) / 10.0 };
}

double
draw_wild_residual(const WildResidualLaw& law, double uniform_draw)
{
  return uniform_draw < law.p_low ? law.atom_low : law.atom_high;
}

namespace {

void
check_square(const DistanceMatrix& d, std::size_t n)
{
  if (d.size() != n)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("distance matrix has {} rows for {} responses", d.size(), n));
  for (const auto& row : d)
    if (row.size() != n)
      throw Error(ErrorCode::InvalidArgument, "distance matrix is not square");
}

// Nonzero kernel weights of one (query, bandwidth) pair.
struct SparseWeights
{
  std::vector<std::size_t> index;
  std::vector<double> weight;
  double total = 0;

  double apply(std::span<const double> y) const
  {
    double s = 0;
    for (std::size_t j = 0; j < index.size(); ++j)
      s += weight[j] * y[index[j]];
    return s / total;
  }
};

SparseWeights
sparse_weights(std::span<const double> distances, const KernelSpec& kernel, double h)
{
  SparseWeights w;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] > h)
      continue;
    const double k = kernel(distances[i] / h);
    if (k > 0.0) {
      w.index.push_back(i);
      w.weight.push_back(k);
      w.total += k;
    }
  }
  return w;
}

} // namespace

std::vector<double>
residuals(const DistanceMatrix& distances,
          std::span<const double> responses,
          const KernelSpec& kernel,
          std::span<const double> h_per_point)
{
  const auto n = responses.size();
  check_square(distances, n);
  if (h_per_point.size() != n)
    throw Error(ErrorCode::InvalidArgument, "one bandwidth per sample point is required");
  std::vector<double> eps(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      eps[i] = responses[i] -
               nadaraya_watson(distances[i], responses, kernel, h_per_point[i]).prediction;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyNeighborhood)
        throw;
      throw Error(ErrorCode::EmptyNeighborhood,
                  fmt::format("in-sample fit at point {} (h = {}) has no positive weight", i,
                              h_per_point[i]));
    }
  }
  return eps;
}

std::vector<double>
residuals(const DistanceMatrix& distances,
          std::span<const double> responses,
          const KernelSpec& kernel,
          int k)
{
  check_square(distances, responses.size());
  std::vector<double> h(responses.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = knn_bandwidth(distances[i], k, true);
  return residuals(distances, responses, kernel, h);
}

std::vector<double>
residuals(const FunctionalSample& sample,
          const KernelSpec& kernel,
          const SemiMetricSpec& spec,
          int k)
{
  const SemiMetric metric(sample, spec);
  return residuals(metric.self_distances(), sample.responses(), kernel, k);
}

int
PilotRule::resolve(int k_max, std::size_t n) const
{
  const auto limit = static_cast<int>(n) - 1;
  int k = 0;
  if (kind == Kind::cross_validation) {
    if (k_max > limit)
      throw Error(ErrorCode::DegeneratePilot,
                  fmt::format("cross-validation grid reaches k = {} in a sample of {}", k_max, n));
    return 0;
  }
  if (kind == Kind::fixed_k) {
    k = k_g;
  } else {
    if (!(factor > 1.0))
      throw Error(ErrorCode::DegeneratePilot,
                  fmt::format("pilot multiplier must exceed 1, got {}", factor));
    k = std::min(static_cast<int>(std::ceil(factor * k_max)), limit);
  }
  if (k < 2 || k > limit)
    throw Error(ErrorCode::DegeneratePilot,
                fmt::format("pilot neighbour count {} outside [2, {}]", k, limit));
  return k;
}

int
PilotRule::resolve(const DistanceMatrix& distances,
                   std::span<const double> responses,
                   const KernelSpec& kernel,
                   int k_min,
                   int k_max) const
{
  if (kind != Kind::cross_validation)
    return resolve(k_max, responses.size());
  resolve(k_max, responses.size());
  std::vector<double> cv;
  try {
    cv = loo_cv_errors(distances, responses, kernel, k_min, k_max);
  } catch (const Error& e) {
    if (!is_numeric_failure(e.code()) && e.code() != ErrorCode::TooFewPoints)
      throw;
    throw Error(ErrorCode::DegeneratePilot, fmt::format("cross-validated pilot: {}", e.what()));
  }
  const auto best = std::min_element(cv.begin(), cv.end());
  return k_min + static_cast<int>(best - cv.begin());
}

std::vector<double>
loo_cv_errors(const DistanceMatrix& distances,
              std::span<const double> responses,
              const KernelSpec& kernel,
              int k_min,
              int k_max)
{
  const auto n = responses.size();
  check_square(distances, n);
  const auto grid_size = static_cast<std::size_t>(std::max(0, k_max - k_min + 1));
  std::vector<double> cv(grid_size, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto grid = knn_bandwidths(distances[i], k_min, k_max, true);
    for (std::size_t j = 0; j < grid_size; ++j) {
      const double h = grid.entries[j].h;
      double num = 0;
      double den = 0;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || distances[i][l] > h)
          continue;
        const double w = kernel(distances[i][l] / h);
        num += w * responses[l];
        den += w;
      }
      if (!(den > 0.0))
        throw Error(ErrorCode::EmptyNeighborhood,
                    fmt::format("leave-one-out fit at point {} (k = {}, h = {}) has no positive "
                                "weight",
                                i, grid.entries[j].k, h));
      const double r = responses[i] - num / den;
      cv[j] += r * r;
    }
  }
  for (auto& v : cv)
    v /= static_cast<double>(n);
  return cv;
}

WildBootstrapResult
bootstrap_error_curve(const DistanceMatrix& sample_distances,
                      const DistanceMatrix& query_distances,
                      bool queries_in_sample,
                      std::span<const double> responses,
                      const KernelSpec& kernel,
                      const BootstrapConfig& config)
{
  const auto n = responses.size();
  check_square(sample_distances, n);
  if (config.n_replications < 1)
    throw Error(ErrorCode::InvalidArgument, "at least one bootstrap replication is required");
  if (query_distances.empty())
    throw Error(ErrorCode::EmptyGrid, "no query to evaluate the bootstrap error at");
  for (const auto& row : query_distances)
    if (row.size() != n)
      throw Error(ErrorCode::InvalidArgument, "query distance rows must have one entry per curve");

  std::vector<std::uint64_t> keys = config.stream_keys;
  if (keys.empty()) {
    keys.resize(n);
    std::iota(keys.begin(), keys.end(), std::uint64_t{ 0 });
  }
  if (keys.size() != n || std::set<std::uint64_t>(keys.begin(), keys.end()).size() != n)
    throw Error(ErrorCode::InvalidArgument, "stream keys must be distinct, one per sample point");

  const int k_g =
    config.pilot.resolve(sample_distances, responses, kernel, config.k_min, config.k_max);

  // Pilot fit r~ at the sample curves and at the queries.
  std::vector<double> pilot_fit(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = knn_bandwidth(sample_distances[i], k_g, true);
    const auto w = sparse_weights(sample_distances[i], kernel, g);
    if (!(w.total > 0.0))
      throw Error(ErrorCode::DegeneratePilot,
                  fmt::format("pilot fit at sample point {} (g = {}) has no positive weight", i, g));
    pilot_fit[i] = w.apply(responses);
  }
  const auto n_queries = query_distances.size();
  std::vector<double> pilot_at_query(n_queries);
  for (std::size_t q = 0; q < n_queries; ++q) {
    const double g = knn_bandwidth(query_distances[q], k_g, queries_in_sample);
    const auto w = sparse_weights(query_distances[q], kernel, g);
    if (!(w.total > 0.0))
      throw Error(ErrorCode::DegeneratePilot,
                  fmt::format("pilot fit at query {} (g = {}) has no positive weight", q, g));
    pilot_at_query[q] = w.apply(responses);
  }

  // Candidate weights do not depend on the replication.
  const auto n_k = static_cast<std::size_t>(config.k_max - config.k_min + 1);
  std::vector<std::vector<SparseWeights>> weights(n_queries);
  std::vector<double> mean_h(n_k, 0.0);
  for (std::size_t q = 0; q < n_queries; ++q) {
    const auto grid =
      knn_bandwidths(query_distances[q], config.k_min, config.k_max, queries_in_sample);
    weights[q].reserve(n_k);
    for (std::size_t j = 0; j < n_k; ++j) {
      const auto& e = grid.entries[j];
      auto w = sparse_weights(query_distances[q], kernel, e.h);
      if (!(w.total > 0.0))
        throw Error(ErrorCode::EmptyNeighborhood,
                    fmt::format("query {} at k = {} (h = {}, replication 0) has no positive "
                                "weight",
                                q, e.k, e.h));
      weights[q].push_back(std::move(w));
      mean_h[j] += e.h;
    }
  }
  for (auto& h : mean_h)
    h /= static_cast<double>(n_queries);

  // Residuals to resample: one set, or one per candidate k.
  std::vector<std::vector<double>> eps;
  if (config.residual_rule == ResidualRule::pilot) {
    eps.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i)
      eps[0][i] = responses[i] - pilot_fit[i];
  } else {
    for (int k = config.k_min; k <= config.k_max; ++k)
      eps.push_back(residuals(sample_distances, responses, kernel, k));
  }

  // err[q][j] accumulates over replications in index order.
  std::vector<std::vector<double>> err(n_queries, std::vector<double>(n_k, 0.0));
  std::vector<double> uniforms(n);
  std::vector<double> y_star(n);
  for (int b = 0; b < config.n_replications; ++b) {
    for (std::size_t i = 0; i < n; ++i)
      uniforms[i] = rng::counter_uniform(config.seed, static_cast<std::uint64_t>(b), keys[i]);
    for (std::size_t set = 0; set < eps.size(); ++set) {
      for (std::size_t i = 0; i < n; ++i)
        y_star[i] = pilot_fit[i] +
                    draw_wild_residual(WildResidualLaw::for_residual(eps[set][i]), uniforms[i]);
      const std::size_t j_lo = eps.size() == 1 ? 0 : set;
      const std::size_t j_hi = eps.size() == 1 ? n_k : set + 1;
      for (std::size_t q = 0; q < n_queries; ++q) {
        for (std::size_t j = j_lo; j < j_hi; ++j) {
          const double diff = weights[q][j].apply(y_star) - pilot_at_query[q];
          err[q][j] += diff * diff;
        }
      }
    }
  }

  WildBootstrapResult result;
  result.pilot_k = k_g;
  result.per_bandwidth.reserve(n_k);
  for (std::size_t j = 0; j < n_k; ++j) {
    double total = 0;
    for (std::size_t q = 0; q < n_queries; ++q)
      total += err[q][j] / config.n_replications;
    result.per_bandwidth.push_back(
      { config.k_min + static_cast<int>(j), mean_h[j], total / static_cast<double>(n_queries) });
  }
  const auto best = select_bandwidth(result);
  result.selected_k = best.k;
  result.selected_h = best.h;
  return result;
}

WildBootstrapResult
bootstrap_error_curve(const FunctionalSample& sample,
                      const KernelSpec& kernel,
                      const SemiMetricSpec& spec,
                      const BootstrapConfig& config)
{
  const SemiMetric metric(sample, spec);
  const auto sample_distances = metric.self_distances();
  DistanceMatrix query_distances;
  bool in_sample = false;
  if (const auto* p = std::get_if<PointwiseEvaluation>(&config.evaluation)) {
    if (p->query_index >= sample.size())
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("query index {} outside a sample of {}", p->query_index,
                              sample.size()));
    query_distances.push_back(sample_distances[p->query_index]);
    in_sample = true;
  } else {
    for (const auto& c : std::get<TestSetEvaluation>(config.evaluation).queries)
      query_distances.push_back(metric.distances_to(c));
  }
  return bootstrap_error_curve(sample_distances, query_distances, in_sample,
                               sample.responses(), kernel, config);
}

WildBootstrapResult::Entry
select_bandwidth(const WildBootstrapResult& result)
{
  if (result.per_bandwidth.empty())
    throw Error(ErrorCode::EmptyGrid, "no candidate bandwidth");
  auto best = result.per_bandwidth.front();
  for (const auto& e : result.per_bandwidth) {
    if (e.mean_sq_boot_error < best.mean_sq_boot_error ||
        (e.mean_sq_boot_error == best.mean_sq_boot_error && e.h < best.h))
      best = e;
  }
  return best;
}

} // namespace funreg
