#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grale/bitset.hpp"
#include "grale/mmer.hpp"
#include "grale/rules.hpp"

namespace grale {

struct RecommendationSet {
  std::vector<Bitset> items;                        ///< per user, over the item system
  std::vector<std::vector<std::uint32_t>> fired;    ///< per user, indices into the RuleSet

  std::size_t user_count() const noexcept { return items.size(); }
  /// Distinct (user, item) pairs.
  std::size_t total() const;
};

struct UserCountSummary {
  std::size_t users = 0;
  std::size_t users_with_recommendations = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

struct AccuracyReport {
  std::size_t recommended = 0;  ///< M
  std::size_t successful = 0;   ///< N
  std::optional<double> accuracy;  ///< N / M, absent when M = 0
  UserCountSummary per_user;
};

/// Fires every rule whose source matches a user and recommends the union of
/// the fired targets, evaluated on `items` (which need not be the item system
/// the rules were mined on). Throws SchemaError if the rules' attribute
/// schemas differ from the systems'.
RecommendationSet recommend(const RuleSet& rs, const InformationSystem& users, const InformationSystem& items);

/// Micro-averaged accuracy of the recommended pairs against `truth`.
AccuracyReport score(const RecommendationSet& recs, const BinaryRelation& truth);

/// One uniformly drawn item per user, reproducible from `seed`.
RecommendationSet random_recommend(const InformationSystem& users, const InformationSystem& items,
                                   std::uint64_t seed);

/// Flat `key=value` lines.
std::string format_accuracy(const AccuracyReport& report);
/// `M,N,accuracy,users,usersWithRecommendations,minPerUser,maxPerUser,meanPerUser`.
std::string accuracy_csv_header();
std::string accuracy_csv_row(const AccuracyReport& report);

/// CSV `userId,itemId,ruleIndices` with indices separated by ';'.
std::string format_recommendations(const RecommendationSet& recs, const RuleSet& rs,
                                   const InformationSystem& users, const InformationSystem& items);

}  // namespace grale
