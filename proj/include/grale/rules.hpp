#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "grale/granule.hpp"
#include "grale/mmer.hpp"

namespace grale {

/// source (user descriptor) ⇒ target (item descriptor).
struct GranularRule {
  Descriptor source;
  Descriptor target;

  auto operator<=>(const GranularRule&) const = default;
  bool operator==(const GranularRule&) const = default;
};

/// Coverage and confidence of a rule. The fractions are derived from the
/// stored counts, so they can be reproduced exactly after a file round-trip.
struct RuleMeasures {
  double scov = 0.0;
  double tcov = 0.0;
  double sconf = 0.0;
  double tc = 0.0;  ///< target-confidence threshold sconf was computed against
  std::size_t source_size = 0;        ///< |LH|
  std::size_t target_size = 0;        ///< |RH|
  std::size_t confident_sources = 0;  ///< users of LH rating ≥ tc·|RH| of RH

  bool operator==(const RuleMeasures&) const = default;
};

struct MiningParams {
  double ms = 0.0;  ///< minimal source coverage
  double mt = 0.0;  ///< minimal target coverage
  double sc = 0.0;  ///< minimal source confidence
  double tc = 0.0;  ///< target confidence threshold

  /// ms, mt in (0, 1]; sc, tc in [0, 1]. Throws ContractViolation otherwise.
  void validate() const;
  bool operator==(const MiningParams&) const = default;
};

struct MinedRule {
  GranularRule rule;
  RuleMeasures measures;

  bool operator==(const MinedRule&) const = default;
};

struct RuleSet {
  MiningParams params;
  std::string fingerprint;  ///< of the MMER the rules were mined from
  std::size_t user_count = 0;
  std::size_t item_count = 0;
  std::vector<AttributeSchema> user_attributes;
  std::vector<AttributeSchema> item_attributes;
  std::vector<MinedRule> rules;  ///< canonical (source, target) order

  std::size_t size() const noexcept { return rules.size(); }
  bool empty() const noexcept { return rules.empty(); }
  bool operator==(const RuleSet&) const = default;
};

/// |LH(GR)| / |U|.
double scov(const Mmer& es, const GranularRule& rule);
/// |RH(GR)| / |V|.
double tcov(const Mmer& es, const GranularRule& rule);
/// Fraction of LH users x with |R(x) ∩ RH| / |RH| ≥ tc. Both sides must be
/// non-empty.
double sconf(const Mmer& es, const GranularRule& rule, double tc);
/// All measures of one rule from scratch.
RuleMeasures measure(const Mmer& es, const GranularRule& rule, double tc);

/// Sandwich miner: every (source granule, target granule) pair with
/// scov ≥ ms, tcov ≥ mt and sconf(·, tc) ≥ sc.
RuleSet mine(const Mmer& es, const MiningParams& params, unsigned workers = 1);

/// Tags rules whose sides are the empty descriptor: "", "empty-source",
/// "empty-target" or "empty-both".
std::string rule_tag(const GranularRule& rule);

std::string format_rules(const RuleSet& rs);
void save_rules(const RuleSet& rs, const std::filesystem::path& path);

struct LoadedRules {
  RuleSet rules;
  std::vector<std::string> warnings;  ///< e.g. fingerprint mismatch
};

/// Parses a rule file against the schema of `es`. Throws RuleFileError on a
/// missing or unknown version header, SchemaError on unknown attributes.
LoadedRules parse_rules(std::string_view text, const Mmer& es);
LoadedRules load_rules(const std::filesystem::path& path, const Mmer& es);

}  // namespace grale
