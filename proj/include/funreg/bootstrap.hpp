#pragma once

#include "funreg/curves.hpp"
#include "funreg/kernels.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace funreg {

using DistanceMatrix = std::vector<std::vector<double>>;

//! Two-point law with atoms eps(1 -/+ sqrt 5)/2 and probabilities
//! (5 +/- sqrt 5)/10: mean 0, second moment eps^2, third moment eps^3.
struct WildResidualLaw
{
  double atom_low;
  double atom_high;
  double p_low;
  double p_high;

  static WildResidualLaw for_residual(double residual);
};

//! atom_low when uniform_draw < p_low, atom_high otherwise.
double
draw_wild_residual(const WildResidualLaw& law, double uniform_draw);

//! In-sample residuals y_i - r^(X_i), where r^(X_i) uses bandwidth
//! h_per_point[i] on the full sample (point i included).
//! `distances[i][j]` is the distance between sample curves i and j.
std::vector<double>
residuals(const DistanceMatrix& distances,
          std::span<const double> responses,
          const KernelSpec& kernel,
          std::span<const double> h_per_point);

//! Same with the kNN rule: h at X_i is the radius holding k other curves.
std::vector<double>
residuals(const DistanceMatrix& distances,
          std::span<const double> responses,
          const KernelSpec& kernel,
          int k);

std::vector<double>
residuals(const FunctionalSample& sample,
          const KernelSpec& kernel,
          const SemiMetricSpec& spec,
          int k);

//! Bandwidth g of the resampling regression r~.
struct PilotRule
{
  enum class Kind
  {
    fixed_k,
    multiplier,
    cross_validation, // k_g minimizes the leave-one-out error over [k_min, k_max]
  };
  Kind kind = Kind::cross_validation;
  int k_g = 0;         // fixed_k
  double factor = 2.0; // multiplier: k_g = min(ceil(factor * k_max), n - 1)

  static PilotRule fixed(int k) { return { Kind::fixed_k, k, 0.0 }; }
  static PilotRule multiplier(double c) { return { Kind::multiplier, 0, c }; }
  static PilotRule cross_validation() { return { Kind::cross_validation, 0, 0.0 }; }

  //! k_g of the fixed and multiplier rules. Throws DegeneratePilot unless
  //! 2 <= k_g <= n - 1; for cross_validation it only checks k_max <= n - 1
  //! and returns 0.
  int resolve(int k_max, std::size_t n) const;

  int resolve(const DistanceMatrix& distances,
              std::span<const double> responses,
              const KernelSpec& kernel,
              int k_min,
              int k_max) const;
};

//! Leave-one-out error (1/n) sum (y_i - r^_{-i}(X_i))^2 of the kNN fit for
//! each k in [k_min, k_max]; the radius at X_i holds k other curves.
std::vector<double>
loo_cv_errors(const DistanceMatrix& distances,
              std::span<const double> responses,
              const KernelSpec& kernel,
              int k_min,
              int k_max);

//! Which fit produces the residuals that get resampled.
enum class ResidualRule
{
  pilot,     // y_i - r~(X_i), one set of residuals for every candidate
  candidate, // y_i - r^_h(X_i), recomputed for each candidate h
};

struct PointwiseEvaluation
{
  std::size_t query_index; // sample curve used as the query
};

struct TestSetEvaluation
{
  std::vector<Curve> queries;
};

struct BootstrapConfig
{
  int n_replications = 100;
  PilotRule pilot = PilotRule::cross_validation();
  ResidualRule residual_rule = ResidualRule::pilot;
  int k_min = 2;
  int k_max = 32;
  std::uint64_t seed = 0;
  std::variant<PointwiseEvaluation, TestSetEvaluation> evaluation = PointwiseEvaluation{ 0 };
  //! Key of each sample point's residual stream; the point's index when
  //! empty. Keys must be distinct.
  std::vector<std::uint64_t> stream_keys;
};

struct WildBootstrapResult
{
  struct Entry
  {
    int k;
    double h; // kNN radius; averaged over the queries in test-set mode
    double mean_sq_boot_error;
  };
  std::vector<Entry> per_bandwidth;
  int selected_k = 0;
  double selected_h = 0;
  int pilot_k = 0;
};

//! Distance-level form. `query_distances[q][i]` is the distance from query q
//! to sample curve i; with `queries_in_sample` each query is itself a
//! sample curve and is excluded when ranking its neighbours.
WildBootstrapResult
bootstrap_error_curve(const DistanceMatrix& sample_distances,
                      const DistanceMatrix& query_distances,
                      bool queries_in_sample,
                      std::span<const double> responses,
                      const KernelSpec& kernel,
                      const BootstrapConfig& config);

WildBootstrapResult
bootstrap_error_curve(const FunctionalSample& sample,
                      const KernelSpec& kernel,
                      const SemiMetricSpec& spec,
                      const BootstrapConfig& config);

//! Entry with the smallest bootstrap error, ties to the smaller h.
WildBootstrapResult::Entry
select_bandwidth(const WildBootstrapResult& result);

} // namespace funreg
