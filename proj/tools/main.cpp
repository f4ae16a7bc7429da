// iep: command line front end. Every subcommand builds an ExperimentConfig and
// hands it to iep::run.
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iep/harness.hpp"
#include "iep/parallel.hpp"

namespace {

struct Flags {
  std::string data, x, y, out, cache_dir;
  std::size_t reps = 0;
  unsigned grid_depth = 0;
  std::size_t threads = 0;
};

std::size_t thread_count(std::size_t requested) {
  const std::size_t cap = iep::default_threads();
  if (requested == 0) return cap;
  // IEP_THREADS caps an explicit --threads as well.
  if (std::getenv("IEP_THREADS") != nullptr) return std::min(requested, cap);
  return requested;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated empirical process statistics and experiments", "iep"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "iep 0.1.0");

  iep::ExperimentConfig config;
  Flags flags;

  auto common = [&](CLI::App* sub, bool has_reps = true) {
    if (has_reps) sub->add_option("--reps", flags.reps, "Monte Carlo replicates");
    sub->add_option("--seed", config.seed, "Root seed");
    sub->add_option("--out", flags.out, "Output file (default stdout)");
    sub->add_option("--threads", flags.threads, "Worker threads (default: all cores)");
  };
  auto depth = [&](CLI::App* sub) {
    sub->add_option("--grid-depth", flags.grid_depth, "Dyadic grid depth of the null simulation");
  };

  auto* gof = app.add_subcommand("gof", "Goodness-of-fit test against a fixed model");
  gof->add_option("--data", flags.data, "Sample CSV, one value per line")->required();
  gof->add_option("--model", config.model, "uniform | normal:mu,sigma | exp:theta | file:<path>");
  gof->add_option("--statistic", config.statistic, "ks | cvm");
  gof->add_option("--cache-dir", flags.cache_dir, "Directory for cached null tables");
  common(gof);
  depth(gof);

  auto* two = app.add_subcommand("twosample", "Two-sample test");
  two->add_option("--x", flags.x, "First sample CSV");
  two->add_option("--y", flags.y, "Second sample CSV");
  two->add_option("--data", flags.data, "Long-format CSV with a group column");
  two->add_option("--group-col", config.group_column, "Group column of --data");
  two->add_option("--value-col", config.value_column, "Value column of --data");
  two->add_option("--statistic", config.statistic, "ks | cvm");
  two->add_option("--q", config.q, "Power of the integrated edfs (q > 1: modified statistic)");
  common(two);
  depth(two);

  auto* ks = app.add_subcommand("ksample", "K-sample test");
  ks->add_option("--data", flags.data, "Long-format CSV")->required();
  ks->add_option("--group-col", config.group_column, "Group column")->default_str("group");
  ks->add_option("--value-col", config.value_column, "Value column");
  ks->add_option("--model", config.model, "Reference model for the cvm statistic");
  ks->add_option("--statistic", config.statistic, "ks | cvm");
  common(ks);
  depth(ks);

  auto* cp = app.add_subcommand("changepoint", "Change-point test");
  cp->add_option("--data", flags.data, "Sample CSV in time order")->required();
  cp->add_flag("--weighted", config.weighted, "Use the weighted statistic");
  common(cp);
  depth(cp);

  auto* est = app.add_subcommand("estimated", "Goodness-of-fit with an estimated parameter");
  est->add_option("--data", flags.data, "Sample CSV")->required();
  est->add_option("--family", config.family, "exp | normal-mean");
  common(est);
  depth(est);

  auto* lt = app.add_subcommand("localtime", "Self-intersection local time growth");
  lt->add_option("--n", config.n_list, "Walk length(s); a single n gives n/16, ..., n");
  common(lt);

  auto* sim = app.add_subcommand("simulate-null", "Critical value table of a limit statistic");
  sim->add_option("--statistic", config.statistic, "ks | cvm | cp | cp-weighted | estimated");
  sim->add_option("--family", config.family, "Family for the estimated statistic");
  sim->add_option("--cache-dir", flags.cache_dir, "Directory for cached null tables");
  common(sim);
  depth(sim);

  auto* rate = app.add_subcommand("rate-experiment", "Coupling rate experiment");
  rate->add_option("--statistic", config.statistic, "integrated | plain | estimated");
  rate->add_option("--family", config.family, "Family for the estimated experiment");
  rate->add_option("--n", config.n_list, "Sample sizes, increasing");
  common(rate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? iep::kExitOk : iep::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.command = iep::parse_command(chosen->get_name());
  if (chosen == ks && config.group_column.empty()) config.group_column = "group";
  if (!flags.x.empty()) config.inputs.push_back(flags.x);
  if (!flags.y.empty()) config.inputs.push_back(flags.y);
  if (!flags.data.empty()) {
    if (!config.inputs.empty()) {
      std::cerr << "usage error: --data cannot be combined with --x/--y\n";
      return iep::kExitUsage;
    }
    config.inputs.push_back(flags.data);
  }
  if (chosen->count("--reps") > 0) config.reps = flags.reps;
  if (chosen->get_option_no_throw("--grid-depth") != nullptr &&
      chosen->count("--grid-depth") > 0) {
    config.grid_depth = flags.grid_depth;
  }
  if (!flags.out.empty()) config.output = flags.out;
  if (!flags.cache_dir.empty()) config.cache_dir = flags.cache_dir;
  config.threads = thread_count(flags.threads);
  return iep::run(config, std::cout, std::cerr);
}
