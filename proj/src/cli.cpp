#include "funreg/cli.hpp"

#include "funreg/bootstrap.hpp"
#include "funreg/error.hpp"
#include "funreg/estimator.hpp"
#include "funreg/io.hpp"
#include "funreg/kernels.hpp"
#include "funreg/rng.hpp"
#include "funreg/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>

namespace funreg::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Every tunable of every command. Defaults first, then the config file,
// then explicit flags.
struct Settings
{
  // estimation
  std::string kernel = "quadratic";
  std::string tau0 = "fractal:1";
  int order = 1;
  int smooth = 0; // moving-average window, 0 = off
  int k = 8;
  int k_min = 2;
  int k_max = 32;
  double level = 0.95;
  // bootstrap
  int n_boot = 100;
  std::string pilot = "cv";
  std::string residuals = "pilot";
  std::string evaluation = "test_set";
  std::uint64_t seed = 1;
  // data
  std::string train;
  std::string test;
  std::string data;
  std::string response_mode = "column";
  std::string test_response_mode;
  std::string train_responses;
  std::string test_responses;
  std::string data_responses;
  std::size_t split = 165;
  std::string out;
  // simulation
  std::size_t n_train = 100;
  std::size_t n_test = 50;
  std::size_t grid_size = 101;
  double noise_variance = 2.0;
  // scalar Monte Carlo
  std::size_t n = 2000;
  double chi = 0.0;
  double h = 0.1;
  double slope = 1.0;
  double noise_sd = 0.5;
  int reps = 5000;
};

Error
invalid(const std::string& message)
{
  return Error(ErrorCode::InvalidArgument, message);
}

// ---------------------------------------------------------------- config file

template<class T>
void
assign_from_json(const json& v, const std::string& key, T& target)
{
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string())
      throw invalid(fmt::format("config key '{}' must be a string", key));
    target = v.get<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number())
      throw invalid(fmt::format("config key '{}' must be a number", key));
    target = v.get<T>();
  } else {
    if (!v.is_number_integer())
      throw invalid(fmt::format("config key '{}' must be an integer", key));
    if (std::is_unsigned_v<T> && v.get<long long>() < 0 && !v.is_number_unsigned())
      throw invalid(fmt::format("config key '{}' must be nonnegative", key));
    target = v.get<T>();
  }
}

using ConfigSetters = std::map<std::string, std::function<void(const json&)>>;

ConfigSetters
config_setters(Settings& s)
{
  ConfigSetters m;
  auto add = [&m](const std::string& key, auto& field) {
    m[key] = [key, &field](const json& v) { assign_from_json(v, key, field); };
  };
  add("kernel", s.kernel);
  add("tau0", s.tau0);
  add("order", s.order);
  add("smooth", s.smooth);
  add("k", s.k);
  add("k_min", s.k_min);
  add("k_max", s.k_max);
  add("level", s.level);
  add("n_boot", s.n_boot);
  add("pilot", s.pilot);
  add("residuals", s.residuals);
  add("evaluation", s.evaluation);
  add("seed", s.seed);
  add("train", s.train);
  add("test", s.test);
  add("data", s.data);
  add("response_mode", s.response_mode);
  add("test_response_mode", s.test_response_mode);
  add("train_responses", s.train_responses);
  add("test_responses", s.test_responses);
  add("data_responses", s.data_responses);
  add("split", s.split);
  add("out", s.out);
  add("n_train", s.n_train);
  add("n_test", s.n_test);
  add("grid_size", s.grid_size);
  add("noise_variance", s.noise_variance);
  add("n", s.n);
  add("chi", s.chi);
  add("h", s.h);
  add("slope", s.slope);
  add("noise_sd", s.noise_sd);
  add("reps", s.reps);
  return m;
}

void
apply_config_file(const std::string& path, Settings& s)
{
  std::ifstream in(path);
  if (!in)
    throw invalid(fmt::format("cannot open config file '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, fmt::format("config file '{}': {}", path, e.what()));
  }
  if (!doc.is_object())
    throw invalid(fmt::format("config file '{}' must hold a JSON object", path));
  auto setters = config_setters(s);
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end())
      throw invalid(fmt::format("config file '{}': unknown key '{}'", path, key));
    it->second(value);
  }
}

// ------------------------------------------------------------ flag plumbing

class Binder
{
public:
  Binder(CLI::App* app, Settings& settings)
    : app_(app)
    , settings_(settings)
  {}

  template<class T>
  Binder& opt(const std::string& flag, T Settings::*field, const std::string& help)
  {
    auto holder = std::make_shared<T>(settings_.*field);
    auto* option = app_->add_option(flag, *holder, help);
    appliers_.push_back([option, holder, field](Settings& s) {
      if (option->count() > 0)
        s.*field = *holder;
    });
    return *this;
  }

  void apply(Settings& s) const
  {
    for (const auto& f : appliers_)
      f(s);
  }

private:
  CLI::App* app_;
  Settings& settings_;
  std::vector<std::function<void(Settings&)>> appliers_;
};

// ------------------------------------------------------------ value parsing

std::pair<std::string, std::string>
split_tag(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    return { text, "" };
  return { text.substr(0, colon), text.substr(colon + 1) };
}

double
parse_number(const std::string& text, const std::string& what)
{
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw invalid(fmt::format("{}: '{}' is not a number", what, text));
  return v;
}

int
parse_int(const std::string& text, const std::string& what)
{
  const double v = parse_number(text, what);
  if (v != std::floor(v))
    throw invalid(fmt::format("{}: '{}' is not an integer", what, text));
  return static_cast<int>(v);
}

KernelSpec
parse_kernel(const std::string& text)
{
  const auto [tag, arg] = split_tag(text);
  KernelSpec k = KernelSpec::uniform();
  if (tag == "uniform")
    k = KernelSpec::uniform();
  else if (tag == "quadratic")
    k = KernelSpec::quadratic();
  else if (tag == "triangle")
    k = KernelSpec::triangle();
  else if (tag == "poly") {
    std::vector<double> c;
    std::size_t start = 0;
    while (start <= arg.size()) {
      const auto comma = arg.find(',', start);
      c.push_back(parse_number(arg.substr(start, comma - start), "kernel coefficient"));
      if (comma == std::string::npos)
        break;
      start = comma + 1;
    }
    k = KernelSpec::polynomial(std::move(c));
  } else
    throw invalid(fmt::format("unknown kernel '{}' (uniform, quadratic, triangle, poly:c0,c1,...)",
                              text));
  validate_kernel(k);
  return k;
}

Tau0Model
parse_tau0(const std::string& text)
{
  const auto [tag, arg] = split_tag(text);
  if (tag == "fractal")
    return Tau0Model::fractal(parse_number(arg, "fractal gamma"));
  if (tag == "dirac")
    return Tau0Model::dirac_at_one();
  if (tag == "indicator")
    return Tau0Model::indicator_unit();
  if (tag == "empirical") {
    std::ifstream in(arg);
    if (!in)
      throw invalid(fmt::format("cannot open tau0 table '{}'", arg));
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos)
        continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorCode::ParseError,
                    fmt::format("tau0 table '{}': expected 's,value' rows", arg));
      table.emplace_back(parse_number(line.substr(0, comma), "tau0 table"),
                         parse_number(line.substr(comma + 1), "tau0 table"));
    }
    return Tau0Model::empirical(std::move(table));
  }
  throw invalid(fmt::format("unknown tau0 model '{}' (fractal:G, dirac, indicator, empirical:FILE)",
                            text));
}

PilotRule
parse_pilot(const std::string& text)
{
  const auto [tag, arg] = split_tag(text);
  if (tag == "multiplier")
    return PilotRule::multiplier(parse_number(arg, "pilot multiplier"));
  if (tag == "fixed")
    return PilotRule::fixed(parse_int(arg, "pilot k"));
  if (text == "cv")
    return PilotRule::cross_validation();
  throw invalid(fmt::format("unknown pilot rule '{}' (cv, multiplier:C or fixed:K)", text));
}

ResidualRule
parse_residual_rule(const std::string& text)
{
  if (text == "pilot")
    return ResidualRule::pilot;
  if (text == "candidate")
    return ResidualRule::candidate;
  throw invalid(fmt::format("unknown residual rule '{}' (pilot or candidate)", text));
}

io::ResponseMode
parse_response_mode(const std::string& text)
{
  if (text == "column")
    return io::ResponseMode::column;
  if (text == "file")
    return io::ResponseMode::file;
  if (text == "none")
    return io::ResponseMode::none;
  throw invalid(fmt::format("unknown response mode '{}' (column, file or none)", text));
}

SemiMetricSpec
semi_metric(const Settings& s)
{
  SemiMetricSpec spec;
  spec.derivative_order = s.order;
  if (s.smooth != 0) {
    spec.presmoothing = Presmoothing::moving_average;
    spec.window = s.smooth;
  }
  spec.validate(1000);
  return spec;
}

// ----------------------------------------------------------------- data

struct Dataset
{
  FunctionalSample train;
  std::optional<io::CurveTable> test;
};

Dataset
load_dataset(const Settings& s, bool need_test)
{
  const auto mode = parse_response_mode(s.response_mode);
  if (mode == io::ResponseMode::none)
    throw invalid("training data needs responses; use --response-mode column or file");

  if (!s.data.empty()) {
    if (!s.train.empty() || !s.test.empty())
      throw invalid("--data cannot be combined with --train/--test");
    const auto all = io::load_sample(s.data, { mode, s.data_responses });
    if (s.split < 1 || s.split >= all.size())
      throw invalid(fmt::format("--split {} must lie in [1, {}) for a dataset of {} curves",
                                s.split, all.size(), all.size()));
    // seeded Fisher-Yates permutation, then each part in file order
    std::vector<std::size_t> perm(all.size());
    std::iota(perm.begin(), perm.end(), std::size_t{ 0 });
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
      const double u = rng::counter_uniform(s.seed, 3, i);
      const auto j = static_cast<std::size_t>(u * static_cast<double>(i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }
    std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s.split));
    std::vector<std::size_t> test_rows(perm.begin() + static_cast<std::ptrdiff_t>(s.split), perm.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    auto test_sample = all.subset(test_rows);
    io::CurveTable test;
    test.grid = test_sample.grid_ptr();
    test.curves.assign(test_sample.curves().begin(), test_sample.curves().end());
    test.responses.assign(test_sample.responses().begin(), test_sample.responses().end());
    return { all.subset(train_rows), std::move(test) };
  }

  if (s.train.empty())
    throw invalid("no training data: pass --train FILE or --data FILE");
  Dataset d{ io::load_sample(s.train, { mode, s.train_responses }), std::nullopt };
  if (!s.test.empty()) {
    const auto test_mode =
      s.test_response_mode.empty() ? mode : parse_response_mode(s.test_response_mode);
    d.test = io::load_curves(s.test, { test_mode, s.test_responses });
    if (*d.test->grid != d.train.grid())
      throw Error(ErrorCode::GridMismatch,
                  fmt::format("'{}' and '{}' use different grids", s.test, s.train));
  }
  if (need_test && !d.test)
    throw invalid("this command needs query curves: pass --test FILE or --data FILE");
  return d;
}

fs::path
output_dir(const Settings& s)
{
  std::string dir = s.out;
  if (dir.empty()) {
    if (const char* env = std::getenv(output_dir_env))
      dir = env;
  }
  if (dir.empty())
    dir = ".";
  fs::create_directories(dir);
  return dir;
}

void
write_text(const fs::path& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw invalid(fmt::format("cannot write '{}'", path.string()));
  f << text;
}

void
check_k(const Settings& s, std::size_t n)
{
  if (s.k < 2 || static_cast<std::size_t>(s.k) > n - 1)
    throw invalid(fmt::format("--k {} must lie in [2, {}]", s.k, n - 1));
}

// -------------------------------------------------------------- commands

int
cmd_constants(const Settings& s, std::ostream& out, std::ostream& err)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto tau0 = parse_tau0(s.tau0);
  const auto report = validate_kernel(kernel);
  if (!report.h2_strict())
    err << "note: kernel " << kernel.name() << " " << report.describe() << "\n";
  const auto c = compute_constants(kernel, tau0);
  out << fmt::format("{} {} {}\n", c.m0, c.m1, c.m2);
  return exit_ok;
}

int
cmd_simulate(const Settings& s, std::ostream& out, std::ostream&)
{
  sim::SimulationConfig config;
  config.n_train = s.n_train;
  config.n_test = s.n_test;
  config.grid_size = s.grid_size;
  config.noise_variance = s.noise_variance;
  config.seed = s.seed;
  config.validate();
  const auto dir = output_dir(s);
  const auto data = sim::generate_functional_sample(config);
  io::write_sample(data.train, dir / "train.csv");
  io::write_sample(data.test, dir / "test.csv");
  std::string truth = "set\tindex\ttrue_regression\n";
  for (std::size_t i = 0; i < data.train_truth.size(); ++i)
    truth += fmt::format("train\t{}\t{:.17g}\n", i, data.train_truth[i]);
  for (std::size_t i = 0; i < data.test_truth.size(); ++i)
    truth += fmt::format("test\t{}\t{:.17g}\n", i, data.test_truth[i]);
  write_text(dir / "truth.tsv", truth);
  out << fmt::format("wrote {} training and {} test curves on {} grid points to {}\n",
                     data.train.size(), data.test.size(), config.grid_size, dir.string());
  return exit_ok;
}

int
cmd_fit(const Settings& s, std::ostream& out, std::ostream&)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto spec = semi_metric(s);
  const auto d = load_dataset(s, false);
  check_k(s, d.train.size());
  const auto dir = output_dir(s);

  const SemiMetric metric(d.train, spec);
  const auto dist = metric.self_distances();
  const auto y = d.train.responses();
  std::string table =
    "index\tresponse\tprediction\tresidual\tbandwidth\tf_hat_empirical\tneighbor_count\n";
  double sse = 0;
  for (std::size_t i = 0; i < d.train.size(); ++i) {
    const double h = knn_bandwidth(dist[i], s.k, true);
    const auto est = nadaraya_watson(dist[i], y, kernel, h);
    const double res = y[i] - est.prediction;
    sse += res * res;
    table += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", i, y[i], est.prediction, res, h,
                         est.f_hat_empirical, est.neighbor_count);
  }
  write_text(dir / "fit.tsv", table);
  out << fmt::format("in-sample fit of {} curves with k = {}: residual mean square {}\n",
                     d.train.size(), s.k, sse / static_cast<double>(d.train.size()));
  return exit_ok;
}

int
predict_like(const Settings& s, std::ostream& out, bool with_ci)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto tau0 = parse_tau0(s.tau0);
  const auto spec = semi_metric(s);
  if (with_ci) {
    if (!(s.level > 0.0 && s.level < 1.0))
      throw invalid(fmt::format("--level {} must lie in (0,1)", s.level));
    const auto report = validate_kernel(kernel);
    if (!report.k1_positive)
      throw Error(ErrorCode::KernelNotH2Strict,
                  fmt::format("--kernel {} has K(1) = {}; confidence intervals need K(1) > 0 "
                              "(use --kernel uniform)",
                              kernel.name(), report.k1));
  }
  const auto d = load_dataset(s, true);
  check_k(s, d.train.size());
  const auto dir = output_dir(s);

  const SemiMetric metric(d.train, spec);
  const auto y = d.train.responses();
  const bool has_truth = !d.test->responses.empty();
  std::string table = "index\tprediction\tbandwidth\tf_hat_empirical\tneighbor_count";
  if (with_ci)
    table += "\tsigma2_hat\tlower\tupper\tlevel";
  if (has_truth)
    table += "\tresponse";
  table += "\n";

  double sse = 0;
  for (std::size_t q = 0; q < d.test->curves.size(); ++q) {
    const auto dist = metric.distances_to(d.test->curves[q]);
    const double h = knn_bandwidth(dist, s.k);
    auto est = nadaraya_watson(dist, y, kernel, h);
    table += fmt::format("{}\t{}\t{}\t{}\t{}", q, est.prediction, h, est.f_hat_empirical,
                         est.neighbor_count);
    if (with_ci) {
      est.sigma2_hat = estimate_sigma2(dist, y, kernel, h);
      const auto ci = confidence_interval(est, kernel, tau0, s.level);
      table += fmt::format("\t{}\t{}\t{}\t{}", *est.sigma2_hat, ci.lower, ci.upper, ci.level);
    }
    if (has_truth) {
      const double e = est.prediction - d.test->responses[q];
      sse += e * e;
      table += fmt::format("\t{}", d.test->responses[q]);
    }
    table += "\n";
  }
  const auto file = with_ci ? "intervals.tsv" : "predictions.tsv";
  write_text(dir / file, table);
  out << fmt::format("{} predictions with k = {} written to {}", d.test->curves.size(), s.k,
                     (dir / file).string());
  if (has_truth)
    out << fmt::format("; test mean squared error {}",
                       sse / static_cast<double>(d.test->curves.size()));
  out << "\n";
  return exit_ok;
}

int
cmd_select(const Settings& s, std::ostream& out, std::ostream&)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto spec = semi_metric(s);
  BootstrapConfig config;
  config.n_replications = s.n_boot;
  config.pilot = parse_pilot(s.pilot);
  config.residual_rule = parse_residual_rule(s.residuals);
  config.k_min = s.k_min;
  config.k_max = s.k_max;
  config.seed = s.seed;
  if (s.n_boot < 1)
    throw invalid("--n-boot must be at least 1");

  const auto [tag, arg] = split_tag(s.evaluation);
  const bool pointwise = tag == "pointwise";
  if (!pointwise && tag != "test_set")
    throw invalid(fmt::format("unknown evaluation '{}' (test_set or pointwise:INDEX)",
                              s.evaluation));
  const auto d = load_dataset(s, !pointwise);
  if (pointwise) {
    const int idx = parse_int(arg, "pointwise query index");
    if (idx < 0 || static_cast<std::size_t>(idx) >= d.train.size())
      throw invalid(fmt::format("pointwise query index {} outside [0, {})", idx, d.train.size()));
    config.evaluation = PointwiseEvaluation{ static_cast<std::size_t>(idx) };
  } else {
    config.evaluation = TestSetEvaluation{ d.test->curves };
  }
  if (s.k_min < 2 || s.k_max < s.k_min || static_cast<std::size_t>(s.k_max) > d.train.size() - 1)
    throw invalid(fmt::format("candidate grid [{}, {}] must satisfy 2 <= k_min <= k_max <= {}",
                              s.k_min, s.k_max, d.train.size() - 1));
  config.pilot.resolve(s.k_max, d.train.size());
  const auto dir = output_dir(s);

  const auto result = bootstrap_error_curve(d.train, kernel, spec, config);
  std::string table = "k\th\tmean_sq_boot_error\tselected\n";
  for (const auto& e : result.per_bandwidth)
    table += fmt::format("{}\t{}\t{}\t{}\n", e.k, e.h, e.mean_sq_boot_error,
                         e.k == result.selected_k ? 1 : 0);
  write_text(dir / "bootstrap_error.tsv", table);
  out << fmt::format("selected k = {} (h = {}), pilot k = {}, {} candidates, {} replications\n",
                     result.selected_k, result.selected_h, result.pilot_k,
                     result.per_bandwidth.size(), config.n_replications);
  return exit_ok;
}

sim::ScalarDesignConfig
scalar_config(const Settings& s)
{
  sim::ScalarDesignConfig c;
  c.n = s.n;
  c.chi = s.chi;
  c.h = s.h;
  c.slope = s.slope;
  c.noise_sd = s.noise_sd;
  c.reps = s.reps;
  c.seed = s.seed;
  c.validate();
  return c;
}

json
theory_json(const BiasVarianceReport& t)
{
  return { { "b_n", t.b_n },
           { "variance_leading", t.variance_leading },
           { "m0", t.constants.m0 },
           { "m1", t.constants.m1 },
           { "m2", t.constants.m2 },
           { "phi_prime", t.phi_prime },
           { "sigma2", t.sigma2 },
           { "h", t.h },
           { "n", t.n },
           { "f_of_h", t.f_of_h } };
}

int
cmd_mc_bias_var(const Settings& s, std::ostream& out, std::ostream&)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto c = scalar_config(s);
  const auto r = sim::mc_bias_variance(c, kernel);
  json j = { { "kernel", kernel.name() },
             { "chi", c.chi },
             { "reps", r.reps },
             { "empirical_bias", r.empirical_bias },
             { "empirical_variance", r.empirical_variance },
             { "mean_neighbors", r.mean_neighbors },
             { "theory", theory_json(r.theory) } };
  out << j.dump(2) << "\n";
  return exit_ok;
}

int
cmd_mc_normality(const Settings& s, std::ostream& out, std::ostream&)
{
  const auto kernel = parse_kernel(s.kernel);
  const auto c = scalar_config(s);
  const auto r = sim::mc_normality(c, kernel);
  json j = { { "kernel", kernel.name() },
             { "chi", c.chi },
             { "reps", c.reps },
             { "ks_statistic", r.ks_statistic },
             { "critical_value_1pct", r.critical_value_1pct },
             { "insufficient_replications", r.insufficient_replications },
             { "applicable", r.applicable } };
  out << j.dump(2) << "\n";
  return exit_ok;
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Functional Nadaraya-Watson regression, wild-bootstrap bandwidth selection and "
                "Monte Carlo checks" };
  app.require_subcommand(1);
  Settings settings;
  std::string config_path;

  struct Command
  {
    CLI::App* app;
    Binder binder;
    std::function<int(const Settings&, std::ostream&, std::ostream&)> handler;
  };
  std::vector<Command> commands;
  commands.reserve(8);

  auto add_command = [&](const std::string& name, const std::string& help, auto handler) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration; flags override it");
    commands.push_back({ sub, Binder(sub, settings), handler });
    return &commands.back().binder;
  };

  auto estimation = [](Binder& b) {
    b.opt("--kernel", &Settings::kernel, "uniform | quadratic | triangle | poly:c0,c1,...")
      .opt("--order", &Settings::order, "derivative order of the semi-metric (0, 1, 2)")
      .opt("--smooth", &Settings::smooth, "moving-average presmoothing window (odd, >= 3; 0 = off)");
  };
  auto data = [](Binder& b) {
    b.opt("--train", &Settings::train, "training curves (CSV)")
      .opt("--test", &Settings::test, "query curves (CSV)")
      .opt("--data", &Settings::data, "single dataset to split into train and test")
      .opt("--split", &Settings::split, "training size when splitting --data")
      .opt("--response-mode", &Settings::response_mode, "column | file")
      .opt("--test-response-mode", &Settings::test_response_mode, "column | file | none")
      .opt("--train-responses", &Settings::train_responses, "response file for --train")
      .opt("--test-responses", &Settings::test_responses, "response file for --test")
      .opt("--data-responses", &Settings::data_responses, "response file for --data")
      .opt("--seed", &Settings::seed, "seed of the train/test split")
      .opt("--out", &Settings::out, "output directory");
  };
  auto scalar = [](Binder& b) {
    b.opt("--kernel", &Settings::kernel, "kernel family")
      .opt("--n", &Settings::n, "sample size")
      .opt("--chi", &Settings::chi, "query point in [0,1]")
      .opt("--bandwidth", &Settings::h, "bandwidth")
      .opt("--slope", &Settings::slope, "slope of the regression r(x) = slope x")
      .opt("--noise-sd", &Settings::noise_sd, "noise standard deviation")
      .opt("--reps", &Settings::reps, "Monte Carlo replications")
      .opt("--seed", &Settings::seed, "seed");
  };

  {
    auto& b = *add_command("constants", "print M0 M1 M2 for a kernel and tau0 model", cmd_constants);
    b.opt("--kernel", &Settings::kernel, "kernel family")
      .opt("--tau0", &Settings::tau0, "fractal:G | dirac | indicator | empirical:FILE");
  }
  {
    auto& b = *add_command("simulate", "generate simulated curve samples", cmd_simulate);
    b.opt("--n-train", &Settings::n_train, "training sample size")
      .opt("--n-test", &Settings::n_test, "test sample size")
      .opt("--grid-size", &Settings::grid_size, "points on [-1, 1]")
      .opt("--noise-variance", &Settings::noise_variance, "variance of the response noise")
      .opt("--seed", &Settings::seed, "seed")
      .opt("--out", &Settings::out, "output directory");
  }
  {
    auto& b = *add_command("fit", "in-sample kNN kernel fit of the training curves", cmd_fit);
    estimation(b);
    data(b);
    b.opt("--k", &Settings::k, "number of neighbours");
  }
  {
    auto& b = *add_command("predict", "predict the responses of query curves",
                           [](const Settings& s, std::ostream& o, std::ostream&) {
                             return predict_like(s, o, false);
                           });
    estimation(b);
    data(b);
    b.opt("--k", &Settings::k, "number of neighbours");
  }
  {
    auto& b = *add_command("ci", "predictions with asymptotic confidence intervals",
                           [](const Settings& s, std::ostream& o, std::ostream&) {
                             return predict_like(s, o, true);
                           });
    estimation(b);
    data(b);
    b.opt("--k", &Settings::k, "number of neighbours")
      .opt("--tau0", &Settings::tau0, "tau0 model for the constants")
      .opt("--level", &Settings::level, "confidence level");
  }
  {
    auto& b = *add_command("select", "wild-bootstrap bandwidth selection", cmd_select);
    estimation(b);
    data(b);
    b.opt("--k-min", &Settings::k_min, "smallest candidate k")
      .opt("--k-max", &Settings::k_max, "largest candidate k")
      .opt("--n-boot", &Settings::n_boot, "bootstrap replications")
      .opt("--pilot", &Settings::pilot, "cv | multiplier:C | fixed:K")
      .opt("--residuals", &Settings::residuals, "pilot | candidate")
      .opt("--evaluation", &Settings::evaluation, "test_set | pointwise:INDEX");
  }
  scalar(*add_command("mc-bias-var", "Monte Carlo bias and variance on the scalar design",
                      cmd_mc_bias_var));
  scalar(*add_command("mc-normality", "Monte Carlo normality check on the scalar design",
                      cmd_mc_normality));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty())
    rev.pop_back(); // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_validation;
  }

  for (auto& c : commands) {
    if (!c.app->parsed())
      continue;
    try {
      if (!config_path.empty())
        apply_config_file(config_path, settings);
      c.binder.apply(settings);
      return c.handler(settings, out, err);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return is_numeric_failure(e.code()) ? exit_numeric : exit_validation;
    } catch (const fs::filesystem_error& e) {
      err << "error: " << e.what() << "\n";
      return exit_validation;
    }
  }
  err << "error: no command given\n";
  return exit_validation;
}

} // namespace funreg::cli
