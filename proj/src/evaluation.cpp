#include "grale/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grale/error.hpp"
#include "grale/random.hpp"
#include "text.hpp"

namespace grale {

namespace {

constexpr std::uint64_t kUserStream = 0;
constexpr std::uint64_t kItemStream = 1;

ColumnStats stats_of(const std::vector<double>& xs) {
  ColumnStats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::vector<std::uint32_t> all_indices(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Random: return "random";
    case ScenarioKind::TrainOnTrain: return "train-on-train";
    case ScenarioKind::NewUser: return "new-user";
    case ScenarioKind::NewItem: return "new-item";
    case ScenarioKind::BothNew: return "both-new";
  }
  return "unknown";
}

ScenarioKind parse_scenario(std::string_view text) {
  for (auto k : {ScenarioKind::Random, ScenarioKind::TrainOnTrain, ScenarioKind::NewUser, ScenarioKind::NewItem,
                 ScenarioKind::BothNew})
    if (to_string(k) == text) return k;
  throw ContractViolation("unknown scenario '" + std::string(text) +
                          "' (expected random, train-on-train, new-user, new-item or both-new)");
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ContractViolation("train fraction must lie strictly between 0 and 1");
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ContractViolation("at least one repetition is required");
  split.validate();
  if (scenario != ScenarioKind::Random) params.validate();
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> partition_indices(std::size_t n,
                                                                                    double train_fraction,
                                                                                    std::uint64_t seed) {
  SplitSpec{train_fraction, seed}.validate();
  const auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (k == 0 || k >= n)
    throw Error("degenerate split: " + std::to_string(k) + " of " + std::to_string(n) + " objects in training");
  auto order = all_indices(n);
  Engine engine(seed);
  shuffle(std::span(order), engine);
  std::vector<std::uint32_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::uint32_t> test(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

MmerSplit split_users(const Mmer& es, const SplitSpec& spec) {
  MmerSplit s;
  std::tie(s.train_users, s.test_users) =
      partition_indices(es.users.object_count(), spec.train_fraction, derive_seed(spec.seed, kUserStream));
  s.train_items = s.test_items = all_indices(es.items.object_count());
  s.train = restrict_mmer(es, s.train_users, s.train_items);
  s.test = restrict_mmer(es, s.test_users, s.test_items);
  return s;
}

MmerSplit split_items(const Mmer& es, const SplitSpec& spec) {
  MmerSplit s;
  std::tie(s.train_items, s.test_items) =
      partition_indices(es.items.object_count(), spec.train_fraction, derive_seed(spec.seed, kItemStream));
  s.train_users = s.test_users = all_indices(es.users.object_count());
  s.train = restrict_mmer(es, s.train_users, s.train_items);
  s.test = restrict_mmer(es, s.test_users, s.test_items);
  return s;
}

MmerSplit split_both(const Mmer& es, const SplitSpec& spec) {
  MmerSplit s;
  std::tie(s.train_users, s.test_users) =
      partition_indices(es.users.object_count(), spec.train_fraction, derive_seed(spec.seed, kUserStream));
  std::tie(s.train_items, s.test_items) =
      partition_indices(es.items.object_count(), spec.train_fraction, derive_seed(spec.seed, kItemStream));
  s.train = restrict_mmer(es, s.train_users, s.train_items);
  s.test = restrict_mmer(es, s.test_users, s.test_items);
  return s;
}

ExperimentSummary ExperimentReport::summary() const {
  std::vector<double> acc, m, tacc, tm, rules;
  ExperimentSummary s;
  for (const auto& r : rows) {
    if (r.test.accuracy) acc.push_back(*r.test.accuracy);
    else ++s.excluded;
    m.push_back(static_cast<double>(r.test.recommended));
    rules.push_back(static_cast<double>(r.rule_count));
    if (r.train) {
      if (r.train->accuracy) tacc.push_back(*r.train->accuracy);
      else ++s.train_excluded;
      tm.push_back(static_cast<double>(r.train->recommended));
    }
  }
  s.accuracy = stats_of(acc);
  s.recommended = stats_of(m);
  s.train_accuracy = stats_of(tacc);
  s.train_recommended = stats_of(tm);
  s.rule_count = stats_of(rules);
  return s;
}

ExperimentReport run_experiment(const Mmer& es, const ExperimentConfig& cfg) {
  cfg.validate();
  es.validate();
  ExperimentReport report{cfg, {}};
  std::optional<RuleSet> full_rules;  // train-on-train mines the same data every time

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    RepetitionResult row;
    row.rep = rep;
    row.seed = derive_seed(cfg.split.seed, rep);
    const SplitSpec split{cfg.split.train_fraction, row.seed};

    switch (cfg.scenario) {
      case ScenarioKind::Random:
        row.test = score(random_recommend(es.users, es.items, row.seed), es.relation);
        break;
      case ScenarioKind::TrainOnTrain: {
        if (!full_rules) full_rules = mine(es, cfg.params, cfg.workers);
        row.rule_count = full_rules->size();
        row.test = score(recommend(*full_rules, es.users, es.items), es.relation);
        if (cfg.record_train) row.train = row.test;
        break;
      }
      case ScenarioKind::NewUser:
      case ScenarioKind::NewItem:
      case ScenarioKind::BothNew: {
        const MmerSplit sp = cfg.scenario == ScenarioKind::NewUser   ? split_users(es, split)
                             : cfg.scenario == ScenarioKind::NewItem ? split_items(es, split)
                                                                     : split_both(es, split);
        // Rules are frozen after training; targets are re-evaluated on the
        // test item system, sources matched against the test users.
        const RuleSet rs = mine(sp.train, cfg.params, cfg.workers);
        row.rule_count = rs.size();
        row.test = score(recommend(rs, sp.test.users, sp.test.items), sp.test.relation);
        if (cfg.record_train) row.train = score(recommend(rs, sp.train.users, sp.train.items), sp.train.relation);
        break;
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<SweepRow> sweep(const Mmer& es, const ExperimentConfig& base, const std::vector<double>& grid) {
  if (grid.empty()) throw ContractViolation("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (double point : grid) {
    ExperimentConfig cfg = base;
    cfg.params.ms = cfg.params.mt = point;
    rows.push_back({point, run_experiment(es, cfg)});
  }
  return rows;
}

namespace {

std::string opt_fixed(const std::optional<double>& v) { return v ? detail::format_fixed(*v, 6) : ""; }

std::string stat_fixed(const ColumnStats& s, bool stddev) {
  if (s.count == 0) return "";
  return detail::format_fixed(stddev ? s.stddev : s.mean, 6);
}

}  // namespace

std::string format_report_csv(const ExperimentReport& report, const std::vector<std::string>& header_lines) {
  using detail::format_exact;
  std::ostringstream out;
  for (const auto& h : header_lines) out << '#' << h << '\n';
  const auto& p = report.config.params;
  const std::string params_cols = format_exact(p.ms) + "," + format_exact(p.mt) + "," + format_exact(p.sc) + "," +
                                  format_exact(p.tc);
  const auto scenario = std::string(to_string(report.config.scenario));
  out << "rep,scenario,ms,mt,sc,tc,ruleCount,M,N,accuracy,trainAccuracy\n";
  std::vector<double> ns;
  for (const auto& r : report.rows) {
    ns.push_back(static_cast<double>(r.test.successful));
    out << r.rep << ',' << scenario << ',' << params_cols << ',' << r.rule_count << ',' << r.test.recommended << ','
        << r.test.successful << ',' << opt_fixed(r.test.accuracy) << ','
        << (r.train ? opt_fixed(r.train->accuracy) : "") << '\n';
  }
  const auto s = report.summary();
  const auto n_stats = stats_of(ns);
  for (bool sd : {false, true}) {
    out << (sd ? "#stddev," : "#mean,") << scenario << ',' << params_cols << ',' << stat_fixed(s.rule_count, sd)
        << ',' << stat_fixed(s.recommended, sd) << ',' << stat_fixed(n_stats, sd) << ','
        << stat_fixed(s.accuracy, sd) << ',' << stat_fixed(s.train_accuracy, sd) << '\n';
  }
  out << "#excluded=" << s.excluded << ",trainExcluded=" << s.train_excluded << '\n';
  return out.str();
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& header_lines) {
  std::ostringstream out;
  for (const auto& h : header_lines) out << '#' << h << '\n';
  out << "x,meanAccuracy,stddevAccuracy,meanM,meanTrainAccuracy,meanTrainM,meanRuleCount,excluded\n";
  for (const auto& row : rows) {
    const auto s = row.report.summary();
    out << detail::format_exact(row.threshold) << ',' << stat_fixed(s.accuracy, false) << ','
        << stat_fixed(s.accuracy, true) << ',' << stat_fixed(s.recommended, false) << ','
        << stat_fixed(s.train_accuracy, false) << ',' << stat_fixed(s.train_recommended, false) << ','
        << stat_fixed(s.rule_count, false) << ',' << s.excluded << '\n';
  }
  return out.str();
}

}  // namespace grale
