#include "funreg/curves.hpp"

#include "funreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace funreg {

SamplingGrid::SamplingGrid(std::vector<double> points)
  : points_(std::move(points))
{
  if (points_.size() < 2)
    throw Error(ErrorCode::GridTooShort, "a sampling grid needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]))
      throw Error(ErrorCode::InvalidArgument,
                  "grid point " + std::to_string(i) + " is not finite");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw Error(ErrorCode::NonMonotoneGrid,
                  "grid is not strictly increasing at point " + std::to_string(i));
  }
}

SamplingGrid
SamplingGrid::uniform(double lo, double hi, std::size_t size)
{
  if (size < 2)
    throw Error(ErrorCode::GridTooShort, "a sampling grid needs at least 2 points");
  std::vector<double> pts(size);
  const double step = (hi - lo) / static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i)
    pts[i] = lo + step * static_cast<double>(i);
  pts.back() = hi;
  return SamplingGrid(std::move(pts));
}

Curve::Curve(GridPtr grid, std::vector<double> values)
  : grid_(std::move(grid))
  , values_(std::move(values))
{
  if (!grid_)
    throw Error(ErrorCode::InvalidArgument, "curve without a grid");
  if (values_.size() != grid_->size())
    throw Error(ErrorCode::GridMismatch,
                "curve has " + std::to_string(values_.size()) +
                  " values for a grid of " + std::to_string(grid_->size()) +
                  " points");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::InvalidArgument,
                  "curve value " + std::to_string(i) + " is not finite");
  }
}

bool
Curve::shares_grid(const Curve& other) const
{
  return grid_ == other.grid_ || *grid_ == *other.grid_;
}

FunctionalSample::FunctionalSample(GridPtr grid,
                                   std::vector<Curve> curves,
                                   std::vector<double> responses)
  : grid_(std::move(grid))
  , curves_(std::move(curves))
  , responses_(std::move(responses))
{
  if (!grid_)
    throw Error(ErrorCode::InvalidArgument, "sample without a grid");
  if (curves_.empty())
    throw Error(ErrorCode::TooFewPoints, "a sample needs at least one curve");
  if (curves_.size() != responses_.size())
    throw Error(ErrorCode::InvalidArgument,
                std::to_string(curves_.size()) + " curves but " +
                  std::to_string(responses_.size()) + " responses");
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    const auto& c = curves_[i];
    if (c.grid_ptr() != grid_ && c.grid() != *grid_)
      throw Error(ErrorCode::GridMismatch,
                  "curve " + std::to_string(i) + " is not on the sample grid");
    if (!std::isfinite(responses_[i]))
      throw Error(ErrorCode::InvalidArgument,
                  "response " + std::to_string(i) + " is not finite");
  }
}

FunctionalSample
FunctionalSample::subset(std::span<const std::size_t> rows) const
{
  std::vector<Curve> curves;
  std::vector<double> responses;
  curves.reserve(rows.size());
  responses.reserve(rows.size());
  for (auto r : rows) {
    if (r >= curves_.size())
      throw Error(ErrorCode::InvalidArgument,
                  "row " + std::to_string(r) + " out of range");
    curves.push_back(curves_[r]);
    responses.push_back(responses_[r]);
  }
  return FunctionalSample(grid_, std::move(curves), std::move(responses));
}

FunctionalSample
FunctionalSample::with_responses(std::vector<double> responses) const
{
  return FunctionalSample(grid_, curves_, std::move(responses));
}

void
SemiMetricSpec::validate(std::size_t grid_size) const
{
  if (derivative_order < 0 || derivative_order > 2)
    throw Error(ErrorCode::InvalidArgument,
                "derivative order must be 0, 1 or 2, got " +
                  std::to_string(derivative_order));
  if (presmoothing == Presmoothing::moving_average &&
      (window < 3 || window % 2 == 0))
    throw Error(ErrorCode::InvalidArgument,
                "moving-average window must be odd and >= 3, got " +
                  std::to_string(window));
  const auto needed = static_cast<std::size_t>(2 * derivative_order + 1);
  if (derivative_order > 0 && grid_size < needed)
    throw Error(ErrorCode::GridTooShort,
                "derivative order " + std::to_string(derivative_order) +
                  " needs at least " + std::to_string(needed) + " grid points");
}

namespace {

std::vector<double>
first_derivative(std::span<const double> t, std::span<const double> f)
{
  const std::size_t m = t.size();
  std::vector<double> out(m);

  // stencils in difference form, so constants differentiate to exactly 0
  // one-sided at the left end, through t0, t1, t2
  {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    out[0] = (2 * h1 + h2) / (h1 * (h1 + h2)) * (f[1] - f[0]) -
             h1 / (h2 * (h1 + h2)) * (f[2] - f[1]);
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double h1 = t[i] - t[i - 1];
    const double h2 = t[i + 1] - t[i];
    out[i] = h2 / (h1 * (h1 + h2)) * (f[i] - f[i - 1]) + h1 / (h2 * (h1 + h2)) * (f[i + 1] - f[i]);
  }
  // mirror image at the right end, through t_{m-3}, t_{m-2}, t_{m-1}
  {
    const double h1 = t[m - 2] - t[m - 3];
    const double h2 = t[m - 1] - t[m - 2];
    out[m - 1] = (2 * h2 + h1) / (h2 * (h1 + h2)) * (f[m - 1] - f[m - 2]) -
                 h2 / (h1 * (h1 + h2)) * (f[m - 2] - f[m - 3]);
  }
  return out;
}

} // namespace

Curve
differentiate(const Curve& curve, int order)
{
  if (order != 1 && order != 2)
    throw Error(ErrorCode::InvalidArgument,
                "differentiation order must be 1 or 2, got " + std::to_string(order));
  const auto needed = static_cast<std::size_t>(2 * order + 1);
  if (curve.size() < needed)
    throw Error(ErrorCode::GridTooShort,
                "order " + std::to_string(order) + " derivative needs " +
                  std::to_string(needed) + " grid points, grid has " +
                  std::to_string(curve.size()));

  auto d = first_derivative(curve.grid().points(), curve.values());
  if (order == 2)
    d = first_derivative(curve.grid().points(), d);
  return Curve(curve.grid_ptr(), std::move(d));
}

Curve
moving_average(const Curve& curve, int window)
{
  if (window < 3 || window % 2 == 0)
    throw Error(ErrorCode::InvalidArgument,
                "moving-average window must be odd and >= 3");
  const auto m = static_cast<std::ptrdiff_t>(curve.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> out(curve.size());
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(m - 1, i + half);
    double s = 0;
    for (auto j = lo; j <= hi; ++j)
      s += curve[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / static_cast<double>(hi - lo + 1);
  }
  return Curve(curve.grid_ptr(), std::move(out));
}

Curve
transform(const Curve& curve, const SemiMetricSpec& spec)
{
  spec.validate(curve.size());
  Curve c = spec.presmoothing == Presmoothing::moving_average
              ? moving_average(curve, spec.window)
              : curve;
  if (spec.derivative_order > 0)
    return differentiate(c, spec.derivative_order);
  return c;
}

std::vector<double>
trapezoid_weights(const SamplingGrid& grid)
{
  const auto t = grid.points();
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double half = 0.5 * (t[i + 1] - t[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

namespace {

double
weighted_l2(std::span<const double> w,
            std::span<const double> a,
            std::span<const double> b)
{
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = a[i] - b[i];
    s += w[i] * d * d;
  }
  return std::sqrt(s);
}

} // namespace

double
semi_metric_distance(const Curve& a, const Curve& b, const SemiMetricSpec& spec)
{
  if (!a.shares_grid(b))
    throw Error(ErrorCode::GridMismatch, "curves are sampled on different grids");
  const auto ta = transform(a, spec);
  const auto tb = transform(b, spec);
  return weighted_l2(trapezoid_weights(a.grid()), ta.values(), tb.values());
}

std::vector<double>
pairwise_distances(const FunctionalSample& sample,
                   const Curve& query,
                   const SemiMetricSpec& spec)
{
  return SemiMetric(sample, spec).distances_to(query);
}

SemiMetric::SemiMetric(const FunctionalSample& sample, SemiMetricSpec spec)
  : grid_(sample.grid_ptr())
  , spec_(spec)
  , weights_(trapezoid_weights(sample.grid()))
{
  spec_.validate(sample.grid().size());
  transformed_.reserve(sample.size());
  for (const auto& c : sample.curves()) {
    const auto t = transform(c, spec_);
    transformed_.emplace_back(t.values().begin(), t.values().end());
  }
}

double
SemiMetric::distance(std::span<const double> a, std::span<const double> b) const
{
  return weighted_l2(weights_, a, b);
}

std::vector<double>
SemiMetric::distances_to(const Curve& query) const
{
  if (query.grid_ptr() != grid_ && query.grid() != *grid_)
    throw Error(ErrorCode::GridMismatch, "query curve is not on the sample grid");
  const auto tq = transform(query, spec_);
  std::vector<double> out;
  out.reserve(transformed_.size());
  for (const auto& x : transformed_)
    out.push_back(distance(x, tq.values()));
  return out;
}

std::vector<std::vector<double>>
SemiMetric::self_distances() const
{
  const auto n = transformed_.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i][j] = d[j][i] = distance(transformed_[i], transformed_[j]);
  return d;
}

} // namespace funreg
