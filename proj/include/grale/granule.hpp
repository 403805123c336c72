#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "grale/bitset.hpp"
#include "grale/mmer.hpp"

namespace grale {

struct AttributeValue {
  std::uint32_t attribute = 0;
  Code value = 0;

  auto operator<=>(const AttributeValue&) const = default;
};

/// Conjunction of attribute-value pairs, at most one per attribute, kept in
/// ascending attribute order. The empty descriptor denotes the whole universe.
class Descriptor {
 public:
  Descriptor() = default;
  /// Sorts the pairs; throws ContractViolation when an attribute repeats.
  static Descriptor from_pairs(std::vector<AttributeValue> pairs);

  const std::vector<AttributeValue>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  bool constrains(std::uint32_t attribute) const;
  /// Every pair of *this also appears in `other`.
  bool is_sub_descriptor_of(const Descriptor& other) const;
  /// Conjunction; throws ContractViolation if the two disagree on an attribute.
  Descriptor conjoin(const Descriptor& other) const;
  Descriptor without(std::size_t position) const;

  /// Canonical order: lexicographic over the pair sequence.
  auto operator<=>(const Descriptor& other) const {
    return std::lexicographical_compare_three_way(pairs_.begin(), pairs_.end(), other.pairs_.begin(),
                                                  other.pairs_.end());
  }
  bool operator==(const Descriptor&) const = default;

 private:
  std::vector<AttributeValue> pairs_;
};

/// Throws ContractViolation when `d` names an attribute or code the system
/// lacks, or uses FALSE on a boolean-from-multivalue attribute.
void validate_descriptor(const InformationSystem& system, const Descriptor& d);

/// Rendered as `attr=value&attr=value`; the empty descriptor renders as `*`.
std::string format_descriptor(const InformationSystem& system, const Descriptor& d);
std::string format_descriptor(const std::vector<AttributeSchema>& schema, const Descriptor& d);
/// Inverse of format_descriptor; throws SchemaError on unknown names/labels.
Descriptor parse_descriptor(const std::vector<AttributeSchema>& schema, std::string_view text);

inline constexpr std::string_view kEmptyDescriptorText = "*";

/// True iff the object row agrees with every pair of `d`.
bool matches(std::span<const Code> row, const Descriptor& d);

/// e(g): the objects satisfying `d`.
Bitset extent(const InformationSystem& system, const Descriptor& d);
/// |e(g)| / |U|.
double support(const InformationSystem& system, const Descriptor& d);

struct Granule {
  Descriptor descriptor;
  Bitset extent;
  double support = 0.0;

  std::size_t extent_size() const { return extent.count(); }
};

struct GranuleSet {
  std::vector<Granule> granules;  ///< canonical descriptor order
  double min_support = 0.0;
  const InformationSystem* system = nullptr;

  std::size_t size() const noexcept { return granules.size(); }
};

/// Per-(attribute, value) extents, the building blocks of every granule.
class ValueIndex {
 public:
  explicit ValueIndex(const InformationSystem& system);
  const Bitset& extent_of(std::uint32_t attribute, Code value) const {
    return extents_.at(attribute).at(value);
  }
  Bitset extent_of(const Descriptor& d) const;

 private:
  std::size_t objects_ = 0;
  std::vector<std::vector<Bitset>> extents_;
};

/// All distinct descriptors whose support reaches `min_support`, in canonical
/// order, generated levelwise with apriori pruning. Requires 0 < min_support ≤ 1.
GranuleSet enumerate_granules(const InformationSystem& system, double min_support, unsigned workers = 1);

/// Tab-separated dump: `descriptor<TAB>support<TAB>extentSize` per granule.
std::string format_granule_set(const GranuleSet& set);

}  // namespace grale
