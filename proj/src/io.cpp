#include "funreg/io.hpp"

#include "funreg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace funreg::io {

namespace {

std::string_view
trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view>
split_cells(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return cells;
}

double
parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t line,
           std::size_t column)
{
  double v = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw Error(ErrorCode::ParseError,
                fmt::format("{}: line {}, column {}: '{}' is not a finite number", path.string(),
                            line, column, cell));
  return v;
}

std::ifstream
open_input(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", path.string()));
  return in;
}

} // namespace

std::vector<double>
load_responses(const std::filesystem::path& path)
{
  auto in = open_input(path);
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cell = trim(line);
    if (cell.empty())
      continue;
    out.push_back(parse_cell(cell, path, line_no, 1));
  }
  return out;
}

CurveTable
load_curves(const std::filesystem::path& path, const LoadOptions& options)
{
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;

  // header
  std::vector<std::string_view> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty())
      header = split_cells(line);
  }
  if (header.empty())
    throw Error(ErrorCode::ParseError, fmt::format("{}: file is empty", path.string()));
  const bool response_column = options.mode == ResponseMode::column;
  if (response_column && header.size() < 3)
    throw Error(ErrorCode::ParseError,
                fmt::format("{}: header needs at least two grid points and a response label",
                            path.string()));
  const std::size_t grid_cells = header.size() - (response_column ? 1 : 0);
  std::vector<double> abscissae;
  for (std::size_t c = 0; c < grid_cells; ++c)
    abscissae.push_back(parse_cell(header[c], path, line_no, c + 1));
  for (std::size_t c = 1; c < abscissae.size(); ++c)
    if (!(abscissae[c] > abscissae[c - 1]))
      throw Error(ErrorCode::NonMonotoneGrid,
                  fmt::format("{}: header abscissa {} at column {} does not exceed {}",
                              path.string(), abscissae[c], c + 1, abscissae[c - 1]));
  CurveTable table;
  table.grid = make_grid(std::move(abscissae));

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto cells = split_cells(line);
    if (cells.size() != header.size())
      throw Error(ErrorCode::RaggedRows,
                  fmt::format("{}: line {} has {} cells, expected {}", path.string(), line_no,
                              cells.size(), header.size()));
    std::vector<double> values(grid_cells);
    for (std::size_t c = 0; c < grid_cells; ++c)
      values[c] = parse_cell(cells[c], path, line_no, c + 1);
    table.curves.emplace_back(table.grid, std::move(values));
    if (response_column)
      table.responses.push_back(parse_cell(cells.back(), path, line_no, cells.size()));
  }
  if (table.curves.empty())
    throw Error(ErrorCode::ParseError, fmt::format("{}: no curve rows", path.string()));

  if (options.mode == ResponseMode::file) {
    table.responses = load_responses(options.response_path);
    if (table.responses.size() != table.curves.size())
      throw Error(ErrorCode::RaggedRows,
                  fmt::format("{} holds {} responses for {} curves in {}",
                              options.response_path.string(), table.responses.size(),
                              table.curves.size(), path.string()));
  }
  return table;
}

FunctionalSample
load_sample(const std::filesystem::path& path, const LoadOptions& options)
{
  if (options.mode == ResponseMode::none)
    throw Error(ErrorCode::InvalidArgument, "a sample needs responses");
  auto t = load_curves(path, options);
  return FunctionalSample(t.grid, std::move(t.curves), std::move(t.responses));
}

void
write_sample(const FunctionalSample& sample, std::ostream& out)
{
  fmt::memory_buffer buf;
  for (double t : sample.grid().points())
    fmt::format_to(std::back_inserter(buf), "{:.17g},", t);
  fmt::format_to(std::back_inserter(buf), "response\n");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (double v : sample.curves()[i].values())
      fmt::format_to(std::back_inserter(buf), "{:.17g},", v);
    fmt::format_to(std::back_inserter(buf), "{:.17g}\n", sample.responses()[i]);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void
write_sample(const FunctionalSample& sample, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write '{}'", path.string()));
  write_sample(sample, out);
}

SampleSummary
summarize(const FunctionalSample& sample)
{
  const auto y = sample.responses();
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  double mean = 0;
  for (double v : y)
    mean += v;
  return { sample.size(), sample.grid().size(), *lo, *hi, mean / static_cast<double>(y.size()) };
}

std::string
format_double(double x)
{
  return fmt::format("{}", x);
}

} // namespace funreg::io
