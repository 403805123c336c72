#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grale/bitset.hpp"

namespace grale {

using Code = std::uint32_t;

enum class AttributeKind {
  Categorical,
  /// One flag of a scaled multi-valued attribute; descriptors may only use TRUE.
  BooleanFromMultivalue,
};

inline constexpr Code kFalse = 0;
inline constexpr Code kTrue = 1;

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::Categorical;
  std::vector<std::string> domain;

  std::optional<Code> code_of(std::string_view label) const;
  /// Throws ContractViolation on an empty domain or duplicate labels.
  void validate() const;

  static AttributeSchema boolean_flag(std::string name);

  bool operator==(const AttributeSchema&) const = default;
};

/// Object × attribute table of categorical codes, S = (U, A).
class InformationSystem {
 public:
  InformationSystem() = default;
  /// `values` is row-major, object_ids.size() × attributes.size().
  InformationSystem(std::vector<std::string> object_ids, std::vector<AttributeSchema> attributes,
                    std::vector<Code> values);

  std::size_t object_count() const noexcept { return object_ids_.size(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  Code value(std::size_t object, std::size_t attribute) const {
    return values_[object * attributes_.size() + attribute];
  }
  std::span<const Code> row(std::size_t object) const {
    return {values_.data() + object * attributes_.size(), attributes_.size()};
  }

  const std::vector<std::string>& object_ids() const noexcept { return object_ids_; }
  const std::vector<AttributeSchema>& attributes() const noexcept { return attributes_; }
  const AttributeSchema& attribute(std::size_t i) const { return attributes_.at(i); }
  std::optional<std::size_t> attribute_index(std::string_view name) const;
  std::optional<std::size_t> object_index(std::string_view id) const;

  /// Sub-system on the given objects (in the given order), same attributes.
  InformationSystem restrict_to(std::span<const std::uint32_t> objects) const;

  bool operator==(const InformationSystem&) const = default;

 private:
  std::vector<std::string> object_ids_;
  std::vector<AttributeSchema> attributes_;
  std::vector<Code> values_;
};

/// R ⊆ U × V stored as one bitset row per source object.
class BinaryRelation {
 public:
  BinaryRelation() = default;
  BinaryRelation(std::size_t sources, std::size_t targets);

  void add(std::size_t source, std::size_t target) { rows_.at(source).set(target); }
  bool contains(std::size_t source, std::size_t target) const { return rows_.at(source).test(target); }
  /// R(x): the targets related to `source`.
  const Bitset& row(std::size_t source) const { return rows_.at(source); }

  std::size_t source_count() const noexcept { return rows_.size(); }
  std::size_t target_count() const noexcept { return targets_; }
  std::size_t cardinality() const;
  double density() const;

  BinaryRelation restrict_to(std::span<const std::uint32_t> sources,
                             std::span<const std::uint32_t> targets) const;

  bool operator==(const BinaryRelation&) const = default;

 private:
  std::size_t targets_ = 0;
  std::vector<Bitset> rows_;
};

/// Many-to-many entity-relationship system ES = (U, A, V, B, R).
struct Mmer {
  InformationSystem users;
  InformationSystem items;
  BinaryRelation relation;

  /// Throws ContractViolation when the relation does not fit the two systems.
  void validate() const;

  bool operator==(const Mmer&) const = default;
};

/// Half-open intervals [b_i, b_{i+1}) with the last one closed.
struct DiscretizationSpec {
  std::string attribute;
  std::vector<double> boundaries;
  std::vector<std::string> labels;

  /// Labels rendered as "[lo,hi)" and "[lo,hi]" for the last interval.
  static DiscretizationSpec from_boundaries(std::string attribute, std::vector<double> boundaries);
  void validate() const;
};

/// User-age cuts used for MovieLens.
DiscretizationSpec movielens_age_intervals();
/// Release-year cuts used for MovieLens.
DiscretizationSpec movielens_year_intervals();

/// Interval code of every value. Throws IngestError naming the attribute on
/// a value outside [first boundary, last boundary].
std::vector<Code> discretize(std::span<const double> values, const DiscretizationSpec& spec);

struct ScaledColumns {
  std::vector<AttributeSchema> attributes;
  std::vector<Code> values;  ///< row-major, rows × attributes.size()
};

/// Scales a multi-valued attribute (given as a rows × names.size() 0/1 flag
/// matrix, row-major) into one boolean-from-multivalue attribute per label.
ScaledColumns scale_multivalued(std::span<const std::uint8_t> flags, std::size_t rows,
                                std::span<const std::string> names);

/// Loads u.user, u.item and u.data from a MovieLens-100K directory.
Mmer load_movielens(const std::filesystem::path& data_dir);

/// Generic format: users.csv, items.csv, edges.csv.
Mmer load_generic(const std::filesystem::path& data_dir);

struct GenericTables {
  std::string users_csv;
  std::string items_csv;
  std::string edges_csv;
};
GenericTables to_generic_tables(const Mmer& es);
Mmer from_generic_tables(const GenericTables& tables);
void dump_generic(const Mmer& es, const std::filesystem::path& out_dir);

/// Content hash of the canonical generic dump, 16 lowercase hex digits.
std::string fingerprint(const Mmer& es);

/// Sub-MMER on the given users and items; relation restricted to that block.
Mmer restrict_mmer(const Mmer& es, std::span<const std::uint32_t> users,
                   std::span<const std::uint32_t> items);

}  // namespace grale
