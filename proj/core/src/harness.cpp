#include "iep/harness.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <utility>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "iep/changepoint.hpp"
#include "iep/coupling.hpp"
#include "iep/errors.hpp"
#include "iep/estimated.hpp"
#include "iep/gof.hpp"
#include "iep/localtime.hpp"
#include "iep/model.hpp"
#include "iep/multisample.hpp"
#include "iep/report.hpp"

namespace iep {

using Json = nlohmann::ordered_json;

namespace {

const std::map<Command, std::string>& command_names() {
  static const std::map<Command, std::string> names{
      {Command::gof, "gof"},
      {Command::twosample, "twosample"},
      {Command::ksample, "ksample"},
      {Command::changepoint, "changepoint"},
      {Command::estimated, "estimated"},
      {Command::localtime, "localtime"},
      {Command::simulate_null, "simulate-null"},
      {Command::rate_experiment, "rate-experiment"},
  };
  return names;
}

unsigned default_grid_depth(const ExperimentConfig& config) {
  if (config.command == Command::changepoint) return 8;
  if (config.command == Command::simulate_null &&
      (config.statistic == "cp" || config.statistic == "cp-weighted")) {
    return 8;
  }
  return kDefaultGridDepth;
}

std::string default_statistic(Command command) {
  switch (command) {
    case Command::rate_experiment:
      return "integrated";
    case Command::gof:
    case Command::twosample:
    case Command::ksample:
    case Command::simulate_null:
      return "ks";
    default:
      return "";
  }
}

// The config with every per-command default filled in.
struct Resolved {
  ExperimentConfig config;
  std::size_t reps;
  unsigned grid_depth;
  std::string statistic;
  std::vector<std::size_t> n_list;
};

Resolved resolve(const ExperimentConfig& config) {
  Resolved r{config, config.reps.value_or(default_reps(config.command)),
             config.grid_depth.value_or(default_grid_depth(config)),
             config.statistic.empty() ? default_statistic(config.command) : config.statistic,
             config.n_list};
  if (r.n_list.empty() && config.command == Command::rate_experiment) {
    r.n_list = {256, 1024, 4096, 16384};
  }
  if (r.n_list.empty() && config.command == Command::localtime) r.n_list = {4096};
  if (config.command == Command::localtime && r.n_list.size() == 1) {
    // A single n expands to the dyadic ladder n/16, ..., n.
    const std::size_t top = r.n_list.front();
    r.n_list.clear();
    for (int shift = 4; shift >= 0; --shift) r.n_list.push_back(top >> shift);
  }
  return r;
}

std::string level_key(double level) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%.2f", level);
  return buffer;
}

Json config_json(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  Json j;
  j["command"] = to_string(c.command);
  Json inputs = Json::array();
  for (const auto& p : c.inputs) inputs.push_back(p.string());
  j["inputs"] = inputs;
  j["reps"] = r.reps;
  j["seed"] = c.seed;
  if (c.command != Command::localtime && c.command != Command::rate_experiment) {
    j["grid_depth"] = r.grid_depth;
  }
  switch (c.command) {
    case Command::gof:
      j["model"] = c.model;
      j["statistic"] = r.statistic;
      break;
    case Command::twosample:
      j["statistic"] = r.statistic;
      j["q"] = c.q;
      if (!c.group_column.empty()) {
        j["group_column"] = c.group_column;
        j["value_column"] = c.value_column;
      }
      break;
    case Command::ksample:
      j["model"] = c.model;
      j["statistic"] = r.statistic;
      j["group_column"] = c.group_column;
      j["value_column"] = c.value_column;
      break;
    case Command::changepoint:
      j["weighted"] = c.weighted;
      break;
    case Command::estimated:
      j["family"] = c.family;
      break;
    case Command::simulate_null:
      j["statistic"] = r.statistic;
      if (r.statistic == "estimated") j["family"] = c.family;
      break;
    case Command::localtime:
      j["n"] = r.n_list;
      break;
    case Command::rate_experiment:
      j["statistic"] = r.statistic;
      if (r.statistic == "estimated") j["family"] = c.family;
      j["n"] = r.n_list;
      break;
  }
  return j;
}

Json test_json(const TestReport& t) {
  Json j;
  j["statistic"] = t.statistic;
  j["value"] = t.value;
  j["p_value"] = t.p_value;
  Json cv;
  for (const auto& [level, value] : t.critical_values) cv[level_key(level)] = value;
  j["critical_values"] = cv;
  j["n"] = t.n;
  j["reps"] = t.reps;
  j["seed"] = t.seed;
  j["grid_intervals"] = t.grid_intervals;
  j["warnings"] = t.warnings;
  return j;
}

std::string envelope(const Resolved& r, Json result) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_json(r);
  j["result"] = std::move(result);
  return j.dump(2) + "\n";
}

std::string comment_header(const Resolved& r) {
  return "# " + config_json(r).dump() + "\n";
}

std::string render_gof(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const Sample sample = read_sample_csv(c.inputs.at(0));
  const DistributionModel model = DistributionModel::parse(c.model);
  GofOptions options;
  options.statistic = parse_gof_statistic(r.statistic);
  options.reps = r.reps;
  options.seed = c.seed;
  options.grid_depth = r.grid_depth;
  options.threads = c.threads;
  options.cache_dir = c.cache_dir;
  return envelope(r, test_json(gof_test(sample, model, options)));
}

std::string render_multisample(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  MultiSampleOptions options;
  options.reps = r.reps;
  options.seed = c.seed;
  options.grid_depth = r.grid_depth;
  options.threads = c.threads;
  options.q = c.q;
  const bool ks = r.statistic == "ks";
  std::optional<DistributionModel> model;
  if (c.command == Command::twosample) {
    options.variant = c.q > 1 ? (ks ? MultiSampleVariant::modified_ks : MultiSampleVariant::modified_cvm)
                              : (ks ? MultiSampleVariant::two_sample_ks : MultiSampleVariant::two_sample_cvm);
  } else {
    options.variant = ks ? MultiSampleVariant::k_sample_ks : MultiSampleVariant::k_sample_cvm;
    model = DistributionModel::parse(c.model);
  }
  const MultiSample ms = [&] {
    if (c.inputs.size() == 1) return read_long_csv(c.inputs[0], c.group_column, c.value_column);
    std::vector<Sample> samples;
    for (const auto& p : c.inputs) samples.push_back(read_sample_csv(p));
    return MultiSample(std::move(samples));
  }();
  multisample_statistic(ms, model, options);  // reject bad inputs before simulating
  Json result = test_json(multisample_test(ms, model, options));
  result["sizes"] = ms.sizes();
  return envelope(r, std::move(result));
}

std::string render_changepoint(Resolved r) {
  const ExperimentConfig& c = r.config;
  const Sample sample = read_sample_csv(c.inputs.at(0));
  if (c.weighted && sample.size() < 4) {
    throw DataError("weighted change-point test needs at least 4 observations");
  }
  if (!c.grid_depth) r.grid_depth = cp_grid_depth(sample.size());
  CpOptions options;
  options.weighted = c.weighted;
  options.reps = r.reps;
  options.seed = c.seed;
  options.grid_depth = r.grid_depth;
  options.threads = c.threads;
  const ChangePointReport report = cp_test(sample, options);
  Json j;
  j["statistic"] = report.statistic;
  j["value"] = report.value;
  j["p_value"] = report.p_value;
  Json cv;
  for (const auto& [level, value] : report.critical_values) cv[level_key(level)] = value;
  j["critical_values"] = cv;
  j["k_hat"] = report.k_hat;
  j["s_hat"] = report.s_hat;
  j["t_hat"] = report.t_hat;
  j["n"] = report.n;
  j["reps"] = report.reps;
  j["seed"] = report.seed;
  j["grid_intervals"] = report.grid_intervals;
  j["warnings"] = report.warnings;
  return envelope(r, std::move(j));
}

std::string render_estimated(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const Sample sample = read_sample_csv(c.inputs.at(0));
  const auto family = parse_family(c.family);
  EstimatedOptions options;
  options.reps = r.reps;
  options.seed = c.seed;
  options.grid_depth = r.grid_depth;
  options.threads = c.threads;
  const EstimatedReport report = estimated_test(sample, *family, options);
  Json j = test_json(report.test);
  j["family"] = report.family;
  j["theta_hat"] = report.theta_hat;
  return envelope(r, std::move(j));
}

std::string render_localtime(const Resolved& r) {
  const LocalTimeGrowth growth =
      lt_growth_experiment(r.n_list, r.reps, r.config.seed, r.config.threads);
  std::string out = comment_header(r);
  out += "# slope=" + format_real(growth.slope) + "\n";
  out += "n,median,q25,q75,normalized_median,median_square_integral\n";
  for (std::size_t i = 0; i < growth.report.rows.size(); ++i) {
    const RateRow& row = growth.report.rows[i];
    out += std::to_string(row.n) + "," + format_real(row.median) + "," + format_real(row.q25) +
           "," + format_real(row.q75) + "," + format_real(row.normalized_median) + "," +
           format_real(growth.median_square_integral[i]) + "\n";
  }
  return out;
}

std::string render_simulate_null(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  const Grid grid = Grid::dyadic(r.grid_depth);
  std::vector<double> values;
  if (r.statistic == "ks" || r.statistic == "cvm") {
    GofOptions options;
    options.statistic = parse_gof_statistic(r.statistic);
    options.reps = r.reps;
    options.seed = c.seed;
    options.grid_depth = r.grid_depth;
    options.threads = c.threads;
    options.cache_dir = c.cache_dir;
    values = gof_null(options).sorted();
  } else if (r.statistic == "cp" || r.statistic == "cp-weighted") {
    std::optional<WeightFunction> w;
    if (r.statistic == "cp-weighted") w = WeightFunction::loglog();
    values = simulate_cp_limit(grid, grid, r.reps, c.seed, w, c.threads);
  } else {
    const auto family = parse_family(c.family);
    values = simulate_estimated_null(*family, 1.0, grid, r.reps, c.seed, c.threads);
  }
  const NullDistribution null(std::move(values));
  std::string out = comment_header(r);
  out += "level,critical_value\n";
  const std::pair<double, const char*> levels[] = {
      {0.50, "0.50"}, {0.75, "0.75"}, {0.90, "0.90"}, {0.95, "0.95"}, {0.975, "0.975"}, {0.99, "0.99"}};
  for (const auto& [level, label] : levels) {
    out += std::string(label) + "," + format_real(null.critical_value(level)) + "\n";
  }
  return out;
}

std::string render_rate(const Resolved& r) {
  const ExperimentConfig& c = r.config;
  RateReport report;
  if (r.statistic == "estimated") {
    const auto family = parse_family(c.family);
    report = epsilon_bar_experiment(*family, 1.0, r.n_list, r.reps, c.seed, c.threads);
  } else {
    report = rate_experiment(r.n_list, r.reps, c.seed, c.threads,
                             r.statistic == "plain" ? CouplingStatistic::plain
                                                    : CouplingStatistic::integrated);
  }
  return comment_header(r) + to_csv(report);
}

bool one_of(const std::string& value, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (value == o) return true;
  }
  return false;
}

}  // namespace

std::string to_string(Command command) { return command_names().at(command); }

Command parse_command(const std::string& name) {
  for (const auto& [command, text] : command_names()) {
    if (text == name) return command;
  }
  throw UsageError("unknown subcommand '" + name + "'");
}

std::size_t default_reps(Command command) {
  switch (command) {
    case Command::estimated:
      return 5000;
    case Command::localtime:
    case Command::rate_experiment:
      return 200;
    default:
      return 10000;
  }
}

void validate(const ExperimentConfig& config) {
  std::vector<std::string> problems;
  const Resolved r = resolve(config);
  const Command cmd = config.command;
  if (config.reps && *config.reps == 0) problems.push_back("--reps must be positive");
  if (r.grid_depth < 1 || r.grid_depth > 16) problems.push_back("--grid-depth must be in [1, 16]");
  if (config.threads == 0) problems.push_back("thread count must be positive");
  const std::size_t inputs = config.inputs.size();
  switch (cmd) {
    case Command::gof:
    case Command::changepoint:
    case Command::estimated:
      if (inputs != 1) problems.push_back(to_string(cmd) + " needs exactly one --data file");
      break;
    case Command::twosample:
      if (inputs == 1 && config.group_column.empty()) {
        problems.push_back("twosample with one file needs --group-col");
      } else if (inputs != 1 && inputs != 2) {
        problems.push_back("twosample needs --x and --y, or one long-format file");
      }
      break;
    case Command::ksample:
      if (inputs == 0) problems.push_back("ksample needs --data");
      if (inputs == 1 && config.group_column.empty()) {
        problems.push_back("ksample with one file needs --group-col");
      }
      break;
    case Command::localtime:
    case Command::simulate_null:
    case Command::rate_experiment:
      if (inputs != 0) problems.push_back(to_string(cmd) + " takes no data files");
      break;
  }
  switch (cmd) {
    case Command::gof:
    case Command::twosample:
    case Command::ksample:
      if (!one_of(r.statistic, {"ks", "cvm"})) problems.push_back("--statistic must be ks or cvm");
      break;
    case Command::simulate_null:
      if (!one_of(r.statistic, {"ks", "cvm", "cp", "cp-weighted", "estimated"})) {
        problems.push_back("--statistic must be ks, cvm, cp, cp-weighted or estimated");
      }
      break;
    case Command::rate_experiment:
      if (!one_of(r.statistic, {"integrated", "plain", "estimated"})) {
        problems.push_back("--statistic must be integrated, plain or estimated");
      }
      break;
    default:
      if (!config.statistic.empty()) problems.push_back(to_string(cmd) + " takes no --statistic");
  }
  if (config.q == 0) problems.push_back("--q must be at least 1");
  if (config.q != 1 && cmd != Command::twosample) problems.push_back("--q applies to twosample only");
  if (config.weighted && cmd != Command::changepoint) {
    problems.push_back("--weighted applies to changepoint only");
  }
  if (!one_of(config.family, {"exp", "normal-mean"})) {
    problems.push_back("--family must be exp or normal-mean");
  }
  if (cmd == Command::localtime || cmd == Command::rate_experiment) {
    if (r.reps < 50) problems.push_back(to_string(cmd) + " needs --reps >= 50");
    for (std::size_t i = 0; i < r.n_list.size(); ++i) {
      if (r.n_list[i] < 2) problems.push_back("every --n must be at least 2");
      if (i > 0 && r.n_list[i] <= r.n_list[i - 1]) problems.push_back("--n values must increase");
    }
    if (cmd == Command::localtime && config.n_list.size() == 1 && config.n_list[0] < 32) {
      problems.push_back("a single --n must be at least 32");
    }
    if (cmd == Command::rate_experiment && !r.n_list.empty() && r.n_list.back() > (std::size_t{1} << 20)) {
      problems.push_back("--n above 2^20 is not supported by the coupling");
    }
  } else if (!config.n_list.empty()) {
    problems.push_back("--n applies to localtime and rate-experiment only");
  }
  if (config.cache_dir && cmd != Command::gof && cmd != Command::simulate_null) {
    problems.push_back("--cache-dir applies to gof and simulate-null only");
  }
  if (problems.empty()) return;
  std::string message = "invalid arguments:";
  for (const auto& p : problems) message += "\n  " + p;
  throw UsageError(message);
}

std::string render(const ExperimentConfig& config) {
  validate(config);
  const Resolved r = resolve(config);
  switch (config.command) {
    case Command::gof:
      return render_gof(r);
    case Command::twosample:
    case Command::ksample:
      return render_multisample(r);
    case Command::changepoint:
      return render_changepoint(r);
    case Command::estimated:
      return render_estimated(r);
    case Command::localtime:
      return render_localtime(r);
    case Command::simulate_null:
      return render_simulate_null(r);
    case Command::rate_experiment:
      return render_rate(r);
  }
  throw std::logic_error("unhandled command");
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string artifact = render(config);
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw DataError("cannot write " + config.output->string());
      file << artifact;
      if (!file) throw DataError("cannot write " + config.output->string());
    } else {
      out << artifact;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace iep
