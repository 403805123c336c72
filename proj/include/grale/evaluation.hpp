#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grale/mmer.hpp"
#include "grale/recommender.hpp"
#include "grale/rules.hpp"

namespace grale {

enum class ScenarioKind { Random, TrainOnTrain, NewUser, NewItem, BothNew };

std::string_view to_string(ScenarioKind kind);
/// Accepts "random", "train-on-train", "new-user", "new-item", "both-new".
ScenarioKind parse_scenario(std::string_view text);

struct SplitSpec {
  double train_fraction = 0.6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ExperimentConfig {
  ScenarioKind scenario = ScenarioKind::BothNew;
  MiningParams params{0.04, 0.04, 0.3, 0.3};
  SplitSpec split;
  std::size_t repetitions = 20;
  bool record_train = true;  ///< also score the rules on the training block
  unsigned workers = 1;

  void validate() const;
};

struct MmerSplit {
  Mmer train;
  Mmer test;
  std::vector<std::uint32_t> train_users, test_users;  ///< indices into the source MMER
  std::vector<std::uint32_t> train_items, test_items;
};

/// round(f·n) objects drawn uniformly without replacement; both sides sorted.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> partition_indices(std::size_t n,
                                                                                    double train_fraction,
                                                                                    std::uint64_t seed);

/// New-user split: U_tr × V and U_te × V.
MmerSplit split_users(const Mmer& es, const SplitSpec& spec);
/// New-item split: U × V_tr and U × V_te.
MmerSplit split_items(const Mmer& es, const SplitSpec& spec);
/// Both-new split: U_tr × V_tr and U_te × V_te; the off-diagonal blocks are dropped.
MmerSplit split_both(const Mmer& es, const SplitSpec& spec);

struct RepetitionResult {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::size_t rule_count = 0;
  AccuracyReport test;
  std::optional<AccuracyReport> train;
};

struct ColumnStats {
  std::size_t count = 0;  ///< rows that contributed
  double mean = 0.0;
  double stddev = 0.0;    ///< sample standard deviation; 0 for fewer than two rows
};

struct ExperimentSummary {
  ColumnStats accuracy;
  ColumnStats recommended;
  ColumnStats train_accuracy;
  ColumnStats train_recommended;
  ColumnStats rule_count;
  std::size_t excluded = 0;        ///< repetitions with M = 0 on the test side
  std::size_t train_excluded = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RepetitionResult> rows;

  ExperimentSummary summary() const;
};

ExperimentReport run_experiment(const Mmer& es, const ExperimentConfig& cfg);

struct SweepRow {
  double threshold = 0.0;  ///< ms = mt
  ExperimentReport report;
};

/// One experiment per grid point with ms = mt = point; every grid point reuses
/// the same per-repetition seeds.
std::vector<SweepRow> sweep(const Mmer& es, const ExperimentConfig& base, const std::vector<double>& grid);

/// `rep,scenario,ms,mt,sc,tc,ruleCount,M,N,accuracy,trainAccuracy`, followed by
/// `#mean,…` / `#stddev,…` comment lines. `header_lines` are emitted first,
/// each prefixed with '#'.
std::string format_report_csv(const ExperimentReport& report, const std::vector<std::string>& header_lines = {});

/// `x,meanAccuracy,stddevAccuracy,meanM,meanTrainAccuracy,meanTrainM,meanRuleCount,excluded`.
std::string format_sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& header_lines = {});

}  // namespace grale
