#include "grale/recommender.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "grale/error.hpp"
#include "grale/random.hpp"
#include "text.hpp"

namespace grale {

std::size_t RecommendationSet::total() const {
  std::size_t n = 0;
  for (const auto& b : items) n += b.count();
  return n;
}

RecommendationSet recommend(const RuleSet& rs, const InformationSystem& users, const InformationSystem& items) {
  if (rs.user_attributes != users.attributes())
    throw SchemaError("rule set user attributes do not match the user system");
  if (rs.item_attributes != items.attributes())
    throw SchemaError("rule set item attributes do not match the item system");

  // Rules arrive sorted by source, so each distinct source is one run of
  // rules; its targets collapse into a single union extent.
  struct SourceGroup {
    const Descriptor* source;
    std::vector<std::uint32_t> rules;
    Bitset targets;
  };
  const ValueIndex item_index(items);
  std::map<Descriptor, Bitset> target_extents;
  std::vector<SourceGroup> groups;
  for (std::uint32_t r = 0; r < rs.rules.size(); ++r) {
    const auto& rule = rs.rules[r].rule;
    try {
      validate_descriptor(users, rule.source);
      validate_descriptor(items, rule.target);
    } catch (const ContractViolation& e) {
      throw SchemaError(std::string("rule ") + std::to_string(r) + ": " + e.what());
    }
    if (groups.empty() || *groups.back().source != rule.source)
      groups.push_back({&rule.source, {}, Bitset(items.object_count())});
    auto it = target_extents.find(rule.target);
    if (it == target_extents.end()) it = target_extents.emplace(rule.target, item_index.extent_of(rule.target)).first;
    groups.back().rules.push_back(r);
    groups.back().targets |= it->second;
  }

  RecommendationSet out;
  out.items.assign(users.object_count(), Bitset(items.object_count()));
  out.fired.resize(users.object_count());
  for (std::size_t x = 0; x < users.object_count(); ++x) {
    const auto row = users.row(x);
    for (const auto& g : groups) {
      if (!matches(row, *g.source)) continue;
      out.items[x] |= g.targets;
      out.fired[x].insert(out.fired[x].end(), g.rules.begin(), g.rules.end());
    }
  }
  return out;
}

AccuracyReport score(const RecommendationSet& recs, const BinaryRelation& truth) {
  if (recs.user_count() != truth.source_count())
    throw ContractViolation("recommendations and truth cover different user sets");
  AccuracyReport report;
  auto& pu = report.per_user;
  pu.users = recs.user_count();
  pu.min = recs.user_count() == 0 ? 0 : SIZE_MAX;
  for (std::size_t x = 0; x < recs.user_count(); ++x) {
    const Bitset& r = recs.items[x];
    if (r.size() != truth.target_count())
      throw ContractViolation("recommendations and truth cover different item sets");
    const std::size_t m = r.count();
    report.recommended += m;
    report.successful += r.intersect_count(truth.row(x));
    if (m > 0) ++pu.users_with_recommendations;
    pu.min = std::min(pu.min, m);
    pu.max = std::max(pu.max, m);
  }
  if (pu.users > 0) pu.mean = static_cast<double>(report.recommended) / static_cast<double>(pu.users);
  if (report.recommended > 0)
    report.accuracy = static_cast<double>(report.successful) / static_cast<double>(report.recommended);
  return report;
}

RecommendationSet random_recommend(const InformationSystem& users, const InformationSystem& items,
                                   std::uint64_t seed) {
  if (items.object_count() == 0) throw ContractViolation("random recommendation needs at least one item");
  Engine engine(seed);
  RecommendationSet out;
  out.items.assign(users.object_count(), Bitset(items.object_count()));
  out.fired.resize(users.object_count());
  for (auto& b : out.items) b.set(static_cast<std::size_t>(uniform_below(engine, items.object_count())));
  return out;
}

std::string format_accuracy(const AccuracyReport& r) {
  std::ostringstream out;
  out << "M=" << r.recommended << '\n'
      << "N=" << r.successful << '\n'
      << "accuracy=" << (r.accuracy ? detail::format_fixed(*r.accuracy, 6) : "absent") << '\n'
      << "users=" << r.per_user.users << '\n'
      << "usersWithRecommendations=" << r.per_user.users_with_recommendations << '\n'
      << "minPerUser=" << r.per_user.min << '\n'
      << "maxPerUser=" << r.per_user.max << '\n'
      << "meanPerUser=" << detail::format_fixed(r.per_user.mean, 6) << '\n';
  return out.str();
}

std::string accuracy_csv_header() {
  return "M,N,accuracy,users,usersWithRecommendations,minPerUser,maxPerUser,meanPerUser";
}

std::string accuracy_csv_row(const AccuracyReport& r) {
  std::ostringstream out;
  out << r.recommended << ',' << r.successful << ',' << (r.accuracy ? detail::format_fixed(*r.accuracy, 6) : "")
      << ',' << r.per_user.users << ',' << r.per_user.users_with_recommendations << ',' << r.per_user.min << ','
      << r.per_user.max << ',' << detail::format_fixed(r.per_user.mean, 6);
  return out.str();
}

std::string format_recommendations(const RecommendationSet& recs, const RuleSet& rs,
                                   const InformationSystem& users, const InformationSystem& items) {
  std::ostringstream out;
  out << "userId,itemId,ruleIndices\n";
  for (std::size_t x = 0; x < recs.user_count(); ++x) {
    const auto& fired = recs.fired[x];
    recs.items[x].for_each([&](std::size_t y) {
      out << detail::csv_field(users.object_ids()[x]) << ',' << detail::csv_field(items.object_ids()[y]) << ',';
      bool first = true;
      for (auto r : fired) {
        // Only the fired rules whose target actually covers this item.
        if (!matches(items.row(y), rs.rules[r].rule.target)) continue;
        out << (first ? "" : ";") << r;
        first = false;
      }
      out << '\n';
    });
  }
  return out.str();
}

}  // namespace grale
