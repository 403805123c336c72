// grale: mine granular association rules, recommend, and run cold-start
// experiments over MovieLens-100K or the generic CSV format.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grale/grale.hpp"

namespace {

struct Options {
  std::string data_dir;
  std::string format = "movielens";
  std::optional<double> ms, mt;
  double sc = 0.3;
  double tc = 0.3;
  std::string scenario = "both-new";
  double train_fraction = 0.6;
  std::size_t reps = 20;
  std::uint64_t seed = 0;
  std::vector<double> grid;
  unsigned workers = 1;
  std::string output;
  std::string rules;
  std::string side = "users";
  double min_support = 0.04;
};

// Flag values that parse but make no sense; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--data-dir", o.data_dir, "Dataset directory (default: $GRALE_DATA_DIR)");
  cmd->add_option("--format", o.format, "Dataset format")->check(CLI::IsMember({"movielens", "generic"}));
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 256u));
}

void add_mining_flags(CLI::App* cmd, Options& o, bool coverage) {
  if (coverage) {
    cmd->add_option("--ms", o.ms, "Minimal source coverage, in (0, 1]");
    cmd->add_option("--mt", o.mt, "Minimal target coverage, in (0, 1]");
  }
  cmd->add_option("--sc", o.sc, "Minimal source confidence")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--tc", o.tc, "Target confidence threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
}

void add_experiment_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "random|train-on-train|new-user|new-item|both-new")
      ->capture_default_str()
      ->check(CLI::IsMember({"random", "train-on-train", "new-user", "new-item", "both-new"}));
  cmd->add_option("--train-fraction", o.train_fraction, "Training share of users/items")->capture_default_str();
  cmd->add_option("--reps", o.reps, "Repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
}

std::filesystem::path resolve_data_dir(const Options& o) {
  if (!o.data_dir.empty()) return o.data_dir;
  if (const char* env = std::getenv("GRALE_DATA_DIR"); env && *env) return env;
  throw UsageError("no dataset: pass --data-dir or set GRALE_DATA_DIR");
}

grale::MiningParams params_of(const Options& o, bool need_coverage) {
  if (need_coverage && (!o.ms || !o.mt)) throw UsageError("--ms and --mt are required");
  grale::MiningParams p{o.ms.value_or(1.0), o.mt.value_or(1.0), o.sc, o.tc};
  try {
    p.validate();
  } catch (const grale::ContractViolation& e) {
    throw UsageError(e.what());
  }
  return p;
}

grale::Mmer load(const Options& o) {
  const auto dir = resolve_data_dir(o);
  return o.format == "generic" ? grale::load_generic(dir) : grale::load_movielens(dir);
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    grale::write_text_file(o.output, text);
  }
}

std::vector<std::string> config_header(const std::string& command, const Options& o, const grale::Mmer& es) {
  std::vector<std::string> h;
  h.push_back("grale " + command);
  h.push_back("dataDir=" + resolve_data_dir(o).string() + ",format=" + o.format);
  h.push_back("fingerprint=" + grale::fingerprint(es) + ",users=" + std::to_string(es.users.object_count()) +
              ",items=" + std::to_string(es.items.object_count()) +
              ",ratings=" + std::to_string(es.relation.cardinality()));
  return h;
}

grale::ExperimentConfig experiment_of(const Options& o, bool need_coverage) {
  grale::ExperimentConfig cfg;
  cfg.scenario = grale::parse_scenario(o.scenario);
  cfg.params = params_of(o, need_coverage && cfg.scenario != grale::ScenarioKind::Random);
  cfg.split = {o.train_fraction, o.seed};
  cfg.repetitions = o.reps;
  cfg.workers = o.workers;
  try {
    cfg.validate();
  } catch (const grale::ContractViolation& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string experiment_line(const grale::ExperimentConfig& cfg) {
  return "scenario=" + std::string(grale::to_string(cfg.scenario)) + ",sc=" + fmt(cfg.params.sc) +
         ",tc=" + fmt(cfg.params.tc) + ",trainFraction=" + fmt(cfg.split.train_fraction) +
         ",reps=" + std::to_string(cfg.repetitions) + ",seed=" + std::to_string(cfg.split.seed);
}

int run_mine(const Options& o) {
  const auto params = params_of(o, true);
  const auto es = load(o);
  const auto rs = grale::mine(es, params, o.workers);
  emit(o, grale::format_rules(rs));
  std::cerr << rs.size() << " rules\n";
  return 0;
}

int run_evaluate(const Options& o) {
  const auto cfg = experiment_of(o, true);
  const auto es = load(o);
  auto header = config_header("evaluate", o, es);
  header.push_back(experiment_line(cfg) + ",ms=" + fmt(cfg.params.ms) + ",mt=" + fmt(cfg.params.mt));
  emit(o, grale::format_report_csv(grale::run_experiment(es, cfg), header));
  return 0;
}

int run_sweep(const Options& o) {
  if (o.grid.empty()) throw UsageError("--grid is required");
  for (double g : o.grid)
    if (!(g > 0.0 && g <= 1.0)) throw UsageError("grid value " + fmt(g) + " is outside (0, 1]");
  const auto cfg = experiment_of(o, false);
  const auto es = load(o);
  auto header = config_header("sweep", o, es);
  std::string grid = "grid=";
  for (std::size_t i = 0; i < o.grid.size(); ++i) grid += (i ? ";" : "") + fmt(o.grid[i]);
  header.push_back(experiment_line(cfg) + "," + grid);
  emit(o, grale::format_sweep_csv(grale::sweep(es, cfg, o.grid), header));
  return 0;
}

int run_recommend(const Options& o) {
  const auto es = load(o);
  const auto loaded = grale::load_rules(o.rules, es);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  const auto recs = grale::recommend(loaded.rules, es.users, es.items);
  std::string text;
  for (const auto& h : config_header("recommend", o, es)) text += "#" + h + "\n";
  text += "#rules=" + o.rules + ",count=" + std::to_string(loaded.rules.size()) + "\n";
  text += grale::format_recommendations(recs, loaded.rules, es.users, es.items);
  emit(o, text);
  std::cerr << grale::format_accuracy(grale::score(recs, es.relation));
  return 0;
}

int run_inspect(const Options& o) {
  if (!(o.min_support > 0.0 && o.min_support <= 1.0)) throw UsageError("--min-support must lie in (0, 1]");
  const auto es = load(o);
  const auto& system = o.side == "users" ? es.users : es.items;
  const auto set = grale::enumerate_granules(system, o.min_support, o.workers);
  std::string text;
  for (const auto& h : config_header("inspect-granules", o, es)) text += "#" + h + "\n";
  text += "#side=" + o.side + ",minSupport=" + fmt(o.min_support) + ",granules=" + std::to_string(set.size()) + "\n";
  text += grale::format_granule_set(set);
  emit(o, text);
  return 0;
}

int run_dump(const Options& o) {
  if (o.output.empty()) throw UsageError("dump-mmer needs -o <directory>");
  const auto es = load(o);
  grale::dump_generic(es, o.output);
  std::cerr << "fingerprint " << grale::fingerprint(es) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Granular association rules and cold-start recommendation"};
  app.require_subcommand(1);
  Options o;

  auto* mine = app.add_subcommand("mine", "Mine rules and write a rule file");
  add_data_flags(mine, o);
  add_mining_flags(mine, o, true);
  mine->add_option("-o,--output", o.output, "Rule file (default: stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Repeated-split evaluation of one scenario");
  add_data_flags(evaluate, o);
  add_mining_flags(evaluate, o, true);
  add_experiment_flags(evaluate, o);
  evaluate->add_option("-o,--output", o.output, "Report CSV (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "Evaluate a grid of ms = mt values");
  add_data_flags(sweep, o);
  add_mining_flags(sweep, o, false);
  add_experiment_flags(sweep, o);
  sweep->add_option("--grid", o.grid, "Comma-separated ms = mt values")->delimiter(',');
  sweep->add_option("-o,--output", o.output, "Sweep CSV (default: stdout)");

  auto* recommend = app.add_subcommand("recommend", "Apply a rule file to the dataset");
  add_data_flags(recommend, o);
  recommend->add_option("--rules", o.rules, "Rule file written by 'mine'")->required();
  recommend->add_option("-o,--output", o.output, "Recommendation CSV (default: stdout)");

  auto* inspect = app.add_subcommand("inspect-granules", "List the granules of one side");
  add_data_flags(inspect, o);
  inspect->add_option("--side", o.side, "users or items")->capture_default_str()->check(CLI::IsMember({"users", "items"}));
  inspect->add_option("--min-support", o.min_support, "Minimal support")->capture_default_str();
  inspect->add_option("-o,--output", o.output, "Output file (default: stdout)");

  auto* dump = app.add_subcommand("dump-mmer", "Write the dataset in the generic CSV format");
  add_data_flags(dump, o);
  dump->add_option("-o,--output", o.output, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*mine) return run_mine(o);
    if (*evaluate) return run_evaluate(o);
    if (*sweep) return run_sweep(o);
    if (*recommend) return run_recommend(o);
    if (*inspect) return run_inspect(o);
    if (*dump) return run_dump(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
