#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace funreg {

//! Strictly increasing, finite abscissae shared by all curves of a sample.
class SamplingGrid
{
public:
  explicit SamplingGrid(std::vector<double> points);

  //! `size` equally spaced points from `lo` to `hi` inclusive.
  static SamplingGrid uniform(double lo, double hi, std::size_t size);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const SamplingGrid& other) const = default;

private:
  std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const SamplingGrid>;

inline GridPtr
make_grid(std::vector<double> points)
{
  return std::make_shared<const SamplingGrid>(std::move(points));
}

//! A function sampled on a shared grid.
class Curve
{
public:
  Curve(GridPtr grid, std::vector<double> values);

  const SamplingGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool shares_grid(const Curve& other) const;

private:
  GridPtr grid_;
  std::vector<double> values_;
};

//! Pairs (X_i, Y_i) with every curve on the sample grid.
class FunctionalSample
{
public:
  FunctionalSample(GridPtr grid,
                   std::vector<Curve> curves,
                   std::vector<double> responses);

  const SamplingGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const Curve> curves() const { return curves_; }
  std::span<const double> responses() const { return responses_; }
  std::size_t size() const { return curves_.size(); }

  //! Sub-sample made of the given row indices, in the given order.
  FunctionalSample subset(std::span<const std::size_t> rows) const;

  //! Same curves with responses replaced.
  FunctionalSample with_responses(std::vector<double> responses) const;

private:
  GridPtr grid_;
  std::vector<Curve> curves_;
  std::vector<double> responses_;
};

enum class Presmoothing
{
  none,
  moving_average,
};

//! How two curves are turned into the scalar ||a - b||: optional
//! presmoothing, then a finite-difference derivative, then the
//! trapezoid L2 norm of the difference.
struct SemiMetricSpec
{
  int derivative_order = 0;
  Presmoothing presmoothing = Presmoothing::none;
  int window = 3; // moving-average width, odd and >= 3

  //! Throws InvalidArgument / GridTooShort when the settings cannot be used on
  //! a grid of `grid_size` points.
  void validate(std::size_t grid_size) const;
};

//! Finite-difference derivative of order 1 or 2 on the curve's own grid.
//! Interior nodes use the three-point Lagrange stencil, endpoints the
//! one-sided three-point stencil; order 2 applies order 1 twice.
Curve
differentiate(const Curve& curve, int order);

//! Centered moving average, truncated at the ends of the grid.
Curve
moving_average(const Curve& curve, int window);

//! Presmoothing followed by differentiation, i.e. the curve whose plain L2
//! norm defines the semi-metric.
Curve
transform(const Curve& curve, const SemiMetricSpec& spec);

//! Trapezoid weights w with sum_j w_j f(t_j) ~ integral of f over the grid.
std::vector<double>
trapezoid_weights(const SamplingGrid& grid);

double
semi_metric_distance(const Curve& a, const Curve& b, const SemiMetricSpec& spec);

//! ||X_i - query|| for every curve of the sample, in sample order.
std::vector<double>
pairwise_distances(const FunctionalSample& sample,
                   const Curve& query,
                   const SemiMetricSpec& spec);

//! Precomputes transformed sample curves so that many queries can be
//! measured against the same sample without repeating the derivative work.
class SemiMetric
{
public:
  SemiMetric(const FunctionalSample& sample, SemiMetricSpec spec);

  std::vector<double> distances_to(const Curve& query) const;

  //! Row i holds the distances from sample curve i to every sample curve.
  std::vector<std::vector<double>> self_distances() const;

  std::size_t size() const { return transformed_.size(); }

private:
  double distance(std::span<const double> a, std::span<const double> b) const;

  GridPtr grid_;
  SemiMetricSpec spec_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> transformed_;
};

} // namespace funreg
