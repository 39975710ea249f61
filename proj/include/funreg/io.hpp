#pragma once

#include "funreg/curves.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace funreg::io {

//! Where the scalar responses of a curve file come from.
//!  - column: the header is the grid followed by one label cell, and every
//!    row carries its response in a final extra column;
//!  - file: the header is the grid only, responses are read one per line
//!    from a companion file;
//!  - none: curves only (query sets), responses are not read.
enum class ResponseMode
{
  column,
  file,
  none,
};

struct LoadOptions
{
  ResponseMode mode = ResponseMode::column;
  std::filesystem::path response_path;
};

struct CurveTable
{
  GridPtr grid;
  std::vector<Curve> curves;
  std::vector<double> responses; // empty in ResponseMode::none
};

CurveTable
load_curves(const std::filesystem::path& path, const LoadOptions& options);

//! Throws ParseError (with line and column), RaggedRows or NonMonotoneGrid.
FunctionalSample
load_sample(const std::filesystem::path& path, const LoadOptions& options);

std::vector<double>
load_responses(const std::filesystem::path& path);

//! Writes the sample in column mode, values with 17 significant digits so
//! that load_sample reproduces it exactly.
void
write_sample(const FunctionalSample& sample, std::ostream& out);
void
write_sample(const FunctionalSample& sample, const std::filesystem::path& path);

struct SampleSummary
{
  std::size_t n;
  std::size_t grid_size;
  double response_min;
  double response_max;
  double response_mean;
};

SampleSummary
summarize(const FunctionalSample& sample);

//! Shortest round-trip text of a double.
std::string
format_double(double x);

} // namespace funreg::io
