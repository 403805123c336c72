#pragma once

// Test-only reference implementations. Everything here works on plain
// vectors and row scans; nothing goes through Bitset, ValueIndex or the
// levelwise enumerator it is used to check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grale/mmer.hpp"

namespace oracle {

using Pairs = std::vector<std::pair<std::uint32_t, grale::Code>>;

inline std::vector<std::size_t> extent(const grale::InformationSystem& s, const Pairs& d) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    bool ok = true;
    for (const auto& [a, v] : d) ok = ok && s.value(x, a) == v;
    if (ok) out.push_back(x);
  }
  return out;
}

/// Every (A', x) in 2^A × U named by its value conjunction, deduplicated,
/// dropping negative multi-valued flags, filtered by support.
inline std::set<Pairs> granules(const grale::InformationSystem& s, double min_support) {
  std::set<Pairs> out;
  const std::size_t m = s.attribute_count();
  const std::size_t n = s.object_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    for (std::size_t x = 0; x < n; ++x) {
      Pairs d;
      bool positive = true;
      for (std::uint32_t a = 0; a < m; ++a) {
        if (!(mask >> a & 1)) continue;
        const auto v = s.value(x, a);
        if (s.attribute(a).kind == grale::AttributeKind::BooleanFromMultivalue && v != grale::kTrue) positive = false;
        d.emplace_back(a, v);
      }
      if (!positive) continue;
      if (static_cast<double>(extent(s, d).size()) / static_cast<double>(n) >= min_support) out.insert(d);
    }
  }
  return out;
}

struct Rule {
  Pairs source, target;
  std::size_t lh = 0, rh = 0, confident = 0;
  auto operator<=>(const Rule&) const = default;
};

/// Double loop over LH × RH per candidate pair.
inline std::size_t confident_users(const grale::Mmer& es, const std::vector<std::size_t>& lh,
                                   const std::vector<std::size_t>& rh, double tc) {
  std::size_t conf = 0;
  for (auto x : lh) {
    std::size_t hits = 0;
    for (auto y : rh)
      if (es.relation.contains(x, y)) ++hits;
    if (static_cast<double>(hits) / static_cast<double>(rh.size()) >= tc) ++conf;
  }
  return conf;
}

inline std::vector<Rule> mine(const grale::Mmer& es, double ms, double mt, double sc, double tc) {
  std::vector<Rule> out;
  for (const auto& s : granules(es.users, ms)) {
    const auto lh = extent(es.users, s);
    for (const auto& t : granules(es.items, mt)) {
      const auto rh = extent(es.items, t);
      const auto conf = confident_users(es, lh, rh, tc);
      if (static_cast<double>(conf) / static_cast<double>(lh.size()) >= sc)
        out.push_back({s, t, lh.size(), rh.size(), conf});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline grale::InformationSystem random_system(std::mt19937_64& rng, std::size_t objects, std::size_t attributes,
                                              std::size_t max_values, const std::string& prefix) {
  std::vector<grale::AttributeSchema> attrs;
  for (std::size_t a = 0; a < attributes; ++a) {
    const std::string name = prefix + std::to_string(a);
    if (rng() % 4 == 0) {
      attrs.push_back(grale::AttributeSchema::boolean_flag(name));
    } else {
      const std::size_t k = 1 + rng() % max_values;
      grale::AttributeSchema schema{name, grale::AttributeKind::Categorical, {}};
      for (std::size_t v = 0; v < k; ++v) schema.domain.push_back("v" + std::to_string(v));
      attrs.push_back(std::move(schema));
    }
  }
  std::vector<std::string> ids;
  std::vector<grale::Code> values;
  for (std::size_t x = 0; x < objects; ++x) {
    ids.push_back(prefix + "o" + std::to_string(x));
    for (const auto& a : attrs) values.push_back(static_cast<grale::Code>(rng() % a.domain.size()));
  }
  return {std::move(ids), std::move(attrs), std::move(values)};
}

/// Up to `max_objects` per side, up to 3 attributes with up to 3 values each.
inline grale::Mmer random_mmer(std::uint64_t seed, std::size_t max_objects = 8) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 1 + rng() % max_objects;
  const std::size_t k = 1 + rng() % max_objects;
  grale::Mmer es;
  es.users = random_system(rng, n, 1 + rng() % 3, 3, "u");
  es.items = random_system(rng, k, 1 + rng() % 3, 3, "i");
  es.relation = grale::BinaryRelation(n, k);
  const auto density = static_cast<double>(rng() % 100) / 100.0;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < k; ++y)
      if (coin(rng) < density) es.relation.add(x, y);
  return es;
}

}  // namespace oracle
