#include "grale/granule.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "grale/error.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace grale {

Descriptor Descriptor::from_pairs(std::vector<AttributeValue> pairs) {
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].attribute == pairs[i - 1].attribute)
      throw ContractViolation("descriptor constrains attribute " + std::to_string(pairs[i].attribute) +
                              " twice");
  Descriptor d;
  d.pairs_ = std::move(pairs);
  return d;
}

bool Descriptor::constrains(std::uint32_t attribute) const {
  return std::any_of(pairs_.begin(), pairs_.end(), [&](const AttributeValue& p) { return p.attribute == attribute; });
}

bool Descriptor::is_sub_descriptor_of(const Descriptor& other) const {
  return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
}

Descriptor Descriptor::conjoin(const Descriptor& other) const {
  std::vector<AttributeValue> merged;
  std::set_union(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                 std::back_inserter(merged));
  return from_pairs(std::move(merged));
}

Descriptor Descriptor::without(std::size_t position) const {
  Descriptor d = *this;
  d.pairs_.erase(d.pairs_.begin() + static_cast<std::ptrdiff_t>(position));
  return d;
}

void validate_descriptor(const InformationSystem& system, const Descriptor& d) {
  for (const auto& [a, v] : d) {
    if (a >= system.attribute_count())
      throw ContractViolation("descriptor attribute " + std::to_string(a) + " out of range");
    const auto& attr = system.attribute(a);
    if (v >= attr.domain.size())
      throw ContractViolation("descriptor code " + std::to_string(v) + " out of domain of '" + attr.name + "'");
    if (attr.kind == AttributeKind::BooleanFromMultivalue && v != kTrue)
      throw ContractViolation("negative value on multi-valued flag '" + attr.name + "'");
  }
}

std::string format_descriptor(const std::vector<AttributeSchema>& schema, const Descriptor& d) {
  if (d.empty()) return std::string(kEmptyDescriptorText);
  std::string out;
  for (const auto& [a, v] : d) {
    if (!out.empty()) out += '&';
    const auto& attr = schema.at(a);
    out += attr.name;
    out += '=';
    out += attr.domain.at(v);
  }
  return out;
}

std::string format_descriptor(const InformationSystem& system, const Descriptor& d) {
  return format_descriptor(system.attributes(), d);
}

Descriptor parse_descriptor(const std::vector<AttributeSchema>& schema, std::string_view text) {
  text = detail::trim(text);
  if (text == kEmptyDescriptorText) return {};
  std::vector<AttributeValue> pairs;
  for (auto term : detail::split(text, '&')) {
    const auto eq = term.find('=');
    if (eq == std::string_view::npos) throw SchemaError("malformed descriptor term '" + std::string(term) + "'");
    const auto name = term.substr(0, eq);
    const auto label = term.substr(eq + 1);
    auto it = std::find_if(schema.begin(), schema.end(), [&](const AttributeSchema& a) { return a.name == name; });
    if (it == schema.end()) throw SchemaError("unknown attribute '" + std::string(name) + "'");
    auto code = it->code_of(label);
    if (!code)
      throw SchemaError("unknown value '" + std::string(label) + "' for attribute '" + std::string(name) + "'");
    if (it->kind == AttributeKind::BooleanFromMultivalue && *code != kTrue)
      throw SchemaError("negative value on multi-valued flag '" + it->name + "'");
    pairs.push_back({static_cast<std::uint32_t>(it - schema.begin()), *code});
  }
  try {
    return Descriptor::from_pairs(std::move(pairs));
  } catch (const ContractViolation& e) {
    throw SchemaError(e.what());
  }
}

bool matches(std::span<const Code> row, const Descriptor& d) {
  return std::all_of(d.begin(), d.end(), [&](const AttributeValue& p) { return row[p.attribute] == p.value; });
}

Bitset extent(const InformationSystem& system, const Descriptor& d) {
  validate_descriptor(system, d);
  Bitset out(system.object_count());
  for (std::size_t x = 0; x < system.object_count(); ++x)
    if (matches(system.row(x), d)) out.set(x);
  return out;
}

double support(const InformationSystem& system, const Descriptor& d) {
  if (system.object_count() == 0) throw ContractViolation("support over an empty universe");
  return static_cast<double>(extent(system, d).count()) / static_cast<double>(system.object_count());
}

ValueIndex::ValueIndex(const InformationSystem& system) : objects_(system.object_count()) {
  extents_.resize(system.attribute_count());
  for (std::size_t a = 0; a < system.attribute_count(); ++a)
    extents_[a].assign(system.attribute(a).domain.size(), Bitset(objects_));
  for (std::size_t x = 0; x < objects_; ++x)
    for (std::size_t a = 0; a < system.attribute_count(); ++a) extents_[a][system.value(x, a)].set(x);
}

Bitset ValueIndex::extent_of(const Descriptor& d) const {
  Bitset out(objects_, true);
  for (const auto& [a, v] : d) out &= extent_of(a, v);
  return out;
}

namespace {

bool meets(std::size_t count, std::size_t universe, double min_support) {
  return static_cast<double>(count) / static_cast<double>(universe) >= min_support;
}

}  // namespace

GranuleSet enumerate_granules(const InformationSystem& system, double min_support, unsigned workers) {
  if (!(min_support > 0.0 && min_support <= 1.0))
    throw ContractViolation("minimum support must lie in (0, 1]");
  GranuleSet result{{}, min_support, &system};
  const std::size_t n = system.object_count();
  if (n == 0) return result;

  const ValueIndex index(system);
  auto make = [&](Descriptor d, Bitset ext) {
    const double s = static_cast<double>(ext.count()) / static_cast<double>(n);
    return Granule{std::move(d), std::move(ext), s};
  };

  result.granules.push_back(make(Descriptor{}, Bitset(n, true)));

  // Level 1: single pairs, positive-only on multi-valued flags.
  std::vector<Granule> level;
  for (std::uint32_t a = 0; a < system.attribute_count(); ++a) {
    const auto& attr = system.attribute(a);
    for (Code v = 0; v < attr.domain.size(); ++v) {
      if (attr.kind == AttributeKind::BooleanFromMultivalue && v != kTrue) continue;
      const Bitset& ext = index.extent_of(a, v);
      if (meets(ext.count(), n, min_support)) level.push_back(make(Descriptor::from_pairs({{a, v}}), ext));
    }
  }

  // Level k+1 joins two level-k granules sharing their first k-1 pairs.
  while (!level.empty()) {
    std::sort(level.begin(), level.end(),
              [](const Granule& l, const Granule& r) { return l.descriptor < r.descriptor; });
    std::set<Descriptor> present;
    for (const auto& g : level) present.insert(g.descriptor);

    std::vector<std::pair<std::size_t, std::size_t>> joins;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto& di = level[i].descriptor.pairs();
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        const auto& dj = level[j].descriptor.pairs();
        if (!std::equal(di.begin(), di.end() - 1, dj.begin(), dj.end() - 1)) break;
        if (di.back().attribute == dj.back().attribute) continue;
        joins.emplace_back(i, j);
      }
    }

    std::vector<std::optional<Granule>> next(joins.size());
    detail::parallel_for(joins.size(), workers, [&](std::size_t k) {
      const auto& [i, j] = joins[k];
      std::vector<AttributeValue> pairs = level[i].descriptor.pairs();
      pairs.push_back(level[j].descriptor.pairs().back());
      auto candidate = Descriptor::from_pairs(std::move(pairs));
      // Every k-subset must itself have survived (anti-monotone support).
      for (std::size_t drop = 0; drop + 2 < candidate.size(); ++drop)
        if (!present.count(candidate.without(drop))) return;
      Bitset ext = level[i].extent & level[j].extent;
      if (meets(ext.count(), n, min_support)) next[k] = make(std::move(candidate), std::move(ext));
    });

    for (auto& g : level) result.granules.push_back(std::move(g));
    level.clear();
    for (auto& g : next)
      if (g) level.push_back(std::move(*g));
  }

  std::sort(result.granules.begin(), result.granules.end(),
            [](const Granule& l, const Granule& r) { return l.descriptor < r.descriptor; });
  return result;
}

std::string format_granule_set(const GranuleSet& set) {
  std::ostringstream out;
  for (const auto& g : set.granules)
    out << format_descriptor(*set.system, g.descriptor) << '\t' << detail::format_fixed(g.support, 6) << '\t'
        << g.extent_size() << '\n';
  return out.str();
}

}  // namespace grale
