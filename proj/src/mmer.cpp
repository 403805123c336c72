#include "grale/mmer.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "grale/error.hpp"
#include "text.hpp"

namespace grale {

namespace fs = std::filesystem;
using detail::split;
using detail::trim;

// ---------------------------------------------------------------------------
// Schema and containers

std::optional<Code> AttributeSchema::code_of(std::string_view label) const {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == label) return static_cast<Code>(i);
  return std::nullopt;
}

void AttributeSchema::validate() const {
  if (domain.empty()) throw ContractViolation("attribute '" + name + "' has an empty domain");
  std::set<std::string_view> seen;
  for (const auto& label : domain)
    if (!seen.insert(label).second)
      throw ContractViolation("attribute '" + name + "' repeats value '" + label + "'");
  if (kind == AttributeKind::BooleanFromMultivalue &&
      (domain.size() != 2 || domain[kFalse] != "0" || domain[kTrue] != "1"))
    throw ContractViolation("boolean attribute '" + name + "' must have domain {0,1}");
}

AttributeSchema AttributeSchema::boolean_flag(std::string name) {
  return {std::move(name), AttributeKind::BooleanFromMultivalue, {"0", "1"}};
}

InformationSystem::InformationSystem(std::vector<std::string> object_ids,
                                     std::vector<AttributeSchema> attributes,
                                     std::vector<Code> values)
    : object_ids_(std::move(object_ids)),
      attributes_(std::move(attributes)),
      values_(std::move(values)) {
  if (values_.size() != object_ids_.size() * attributes_.size())
    throw ContractViolation("value matrix does not match objects × attributes");
  std::set<std::string_view> names;
  for (const auto& a : attributes_) {
    a.validate();
    if (!names.insert(a.name).second) throw ContractViolation("duplicate attribute '" + a.name + "'");
  }
  std::set<std::string_view> ids;
  for (const auto& id : object_ids_)
    if (!ids.insert(id).second) throw ContractViolation("duplicate object id '" + id + "'");
  for (std::size_t x = 0; x < object_ids_.size(); ++x)
    for (std::size_t a = 0; a < attributes_.size(); ++a)
      if (value(x, a) >= attributes_[a].domain.size())
        throw ContractViolation("code out of domain for attribute '" + attributes_[a].name + "'");
}

std::optional<std::size_t> InformationSystem::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> InformationSystem::object_index(std::string_view id) const {
  for (std::size_t i = 0; i < object_ids_.size(); ++i)
    if (object_ids_[i] == id) return i;
  return std::nullopt;
}

InformationSystem InformationSystem::restrict_to(std::span<const std::uint32_t> objects) const {
  std::vector<std::string> ids;
  std::vector<Code> values;
  ids.reserve(objects.size());
  values.reserve(objects.size() * attributes_.size());
  for (auto x : objects) {
    ids.push_back(object_ids_.at(x));
    auto r = row(x);
    values.insert(values.end(), r.begin(), r.end());
  }
  return InformationSystem(std::move(ids), attributes_, std::move(values));
}

BinaryRelation::BinaryRelation(std::size_t sources, std::size_t targets)
    : targets_(targets), rows_(sources, Bitset(targets)) {}

std::size_t BinaryRelation::cardinality() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.count();
  return n;
}

double BinaryRelation::density() const {
  const double cells = static_cast<double>(rows_.size()) * static_cast<double>(targets_);
  return cells == 0 ? 0.0 : static_cast<double>(cardinality()) / cells;
}

BinaryRelation BinaryRelation::restrict_to(std::span<const std::uint32_t> sources,
                                           std::span<const std::uint32_t> targets) const {
  BinaryRelation out(sources.size(), targets.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Bitset& r = rows_.at(sources[i]);
    for (std::size_t j = 0; j < targets.size(); ++j)
      if (r.test(targets[j])) out.add(i, j);
  }
  return out;
}

void Mmer::validate() const {
  if (relation.source_count() != users.object_count() ||
      relation.target_count() != items.object_count())
    throw ContractViolation("relation dimensions do not match the user and item systems");
}

Mmer restrict_mmer(const Mmer& es, std::span<const std::uint32_t> users,
                   std::span<const std::uint32_t> items) {
  return Mmer{es.users.restrict_to(users), es.items.restrict_to(items),
              es.relation.restrict_to(users, items)};
}

// ---------------------------------------------------------------------------
// Discretization and scaling

DiscretizationSpec DiscretizationSpec::from_boundaries(std::string attribute,
                                                       std::vector<double> boundaries) {
  DiscretizationSpec spec{std::move(attribute), std::move(boundaries), {}};
  for (std::size_t i = 0; i + 1 < spec.boundaries.size(); ++i) {
    const bool last = i + 2 == spec.boundaries.size();
    spec.labels.push_back("[" + detail::format_exact(spec.boundaries[i]) + "," +
                          detail::format_exact(spec.boundaries[i + 1]) + (last ? "]" : ")"));
  }
  spec.validate();
  return spec;
}

void DiscretizationSpec::validate() const {
  if (boundaries.size() < 2) throw ContractViolation(attribute + ": need at least two boundaries");
  if (labels.size() + 1 != boundaries.size())
    throw ContractViolation(attribute + ": one label per interval required");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i - 1] < boundaries[i]))
      throw ContractViolation(attribute + ": boundaries must be strictly increasing");
}

DiscretizationSpec movielens_age_intervals() {
  return DiscretizationSpec::from_boundaries("age", {7, 22, 27, 31, 39, 48, 73});
}

DiscretizationSpec movielens_year_intervals() {
  return DiscretizationSpec::from_boundaries("release-year",
                                             {1922, 1980, 1993, 1994, 1995, 1996, 1997, 1998});
}

std::vector<Code> discretize(std::span<const double> values, const DiscretizationSpec& spec) {
  spec.validate();
  std::vector<Code> codes;
  codes.reserve(values.size());
  const auto& b = spec.boundaries;
  for (double v : values) {
    if (!(v >= b.front() && v <= b.back()))
      throw IngestError("value " + detail::format_exact(v) + " of attribute '" + spec.attribute +
                        "' lies outside [" + detail::format_exact(b.front()) + "," +
                        detail::format_exact(b.back()) + "]");
    // First boundary strictly greater than v closes v's interval.
    auto it = std::upper_bound(b.begin(), b.end(), v);
    auto code = static_cast<Code>(std::distance(b.begin(), it)) - 1;
    code = std::min<Code>(code, static_cast<Code>(spec.labels.size() - 1));
    codes.push_back(code);
  }
  return codes;
}

ScaledColumns scale_multivalued(std::span<const std::uint8_t> flags, std::size_t rows,
                                std::span<const std::string> names) {
  if (flags.size() != rows * names.size())
    throw ContractViolation("flag matrix shape does not match rows × labels");
  ScaledColumns out;
  for (const auto& n : names) out.attributes.push_back(AttributeSchema::boolean_flag(n));
  out.values.reserve(flags.size());
  for (auto f : flags) {
    if (f > 1) throw ContractViolation("multi-valued flags must be 0 or 1");
    out.values.push_back(f ? kTrue : kFalse);
  }
  return out;
}

// ---------------------------------------------------------------------------
// MovieLens-100K

namespace {

const std::vector<std::string>& movielens_genres() {
  static const std::vector<std::string> genres = {
      "unknown", "Action",  "Adventure", "Animation", "Children's", "Comedy",   "Crime",
      "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror",    "Musical",  "Mystery",
      "Romance", "Sci-Fi",  "Thriller",  "War",       "Western"};
  return genres;
}

constexpr std::string_view kMissingYear = "unknown";

template <typename T>
T parse_number(std::string_view text, const fs::path& file, std::size_t line) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw IngestError(file.filename().string() + ":" + std::to_string(line) + ": expected a number, got '" +
                      std::string(text) + "'");
  return value;
}

std::vector<std::string_view> lines_of(const std::string& text) {
  std::vector<std::string_view> out;
  for (auto l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    out.push_back(l);
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IngestError("missing input file " + path.string());
  return detail::read_file(path);
}

/// Sorted distinct labels; codes follow that order.
AttributeSchema categorical_from(std::string name, const std::vector<std::string>& labels,
                                 std::vector<Code>& codes) {
  std::vector<std::string> domain(labels);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  codes.clear();
  for (const auto& l : labels)
    codes.push_back(static_cast<Code>(std::lower_bound(domain.begin(), domain.end(), l) - domain.begin()));
  return {std::move(name), AttributeKind::Categorical, std::move(domain)};
}

struct IdOrder {
  std::vector<long> ids;
  std::unordered_map<long, std::uint32_t> index;

  explicit IdOrder(std::vector<long> raw) : ids(std::move(raw)) {
    std::vector<long> sorted(ids);
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t i = 0; i < sorted.size(); ++i) index.emplace(sorted[i], i);
  }
};

InformationSystem load_movielens_users(const fs::path& file) {
  const std::string text = require_file(file);
  struct Row {
    long id;
    double age;
    std::string gender, occupation;
  };
  std::vector<Row> rows;
  std::set<long> seen;
  std::size_t line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line, '|');
    if (f.size() != 5)
      throw IngestError(file.filename().string() + ":" + std::to_string(line_no) +
                        ": expected 5 '|'-separated fields, got " + std::to_string(f.size()));
    Row r{parse_number<long>(f[0], file, line_no), parse_number<double>(f[1], file, line_no),
          std::string(trim(f[2])), std::string(trim(f[3]))};
    if (r.gender.empty() || r.occupation.empty())
      throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": empty field");
    if (!seen.insert(r.id).second)
      throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": duplicate user id " +
                        std::to_string(r.id));
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });

  std::vector<double> ages;
  std::vector<std::string> genders, occupations, ids;
  for (const auto& r : rows) {
    ids.push_back(std::to_string(r.id));
    ages.push_back(r.age);
    genders.push_back(r.gender);
    occupations.push_back(r.occupation);
  }
  const auto age_spec = movielens_age_intervals();
  const auto age_codes = discretize(ages, age_spec);
  std::vector<Code> gender_codes, occupation_codes;
  std::vector<AttributeSchema> attrs{
      {age_spec.attribute, AttributeKind::Categorical, age_spec.labels},
      categorical_from("gender", genders, gender_codes),
      categorical_from("occupation", occupations, occupation_codes)};
  std::vector<Code> values;
  values.reserve(rows.size() * 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values.push_back(age_codes[i]);
    values.push_back(gender_codes[i]);
    values.push_back(occupation_codes[i]);
  }
  return InformationSystem(std::move(ids), std::move(attrs), std::move(values));
}

InformationSystem load_movielens_items(const fs::path& file) {
  const std::string text = require_file(file);
  const auto& genres = movielens_genres();
  struct Row {
    long id;
    std::optional<double> year;
    std::vector<std::uint8_t> flags;
  };
  std::vector<Row> rows;
  std::set<long> seen;
  std::size_t line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line, '|');
    if (f.size() != 5 + genres.size())
      throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(5 + genres.size()) + " '|'-separated fields, got " +
                        std::to_string(f.size()));
    Row r{parse_number<long>(f[0], file, line_no), std::nullopt, {}};
    const auto date = trim(f[2]);
    if (!date.empty()) {
      if (date.size() < 4)
        throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": bad release date");
      r.year = parse_number<double>(date.substr(date.size() - 4), file, line_no);
    }
    // Column 0 ("unknown") is dropped; the remaining 18 genres are kept.
    for (std::size_t g = 1; g < genres.size(); ++g) {
      const auto v = parse_number<int>(f[5 + g], file, line_no);
      if (v != 0 && v != 1)
        throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": genre flag must be 0/1");
      r.flags.push_back(static_cast<std::uint8_t>(v));
    }
    if (!seen.insert(r.id).second)
      throw IngestError(file.filename().string() + ":" + std::to_string(line_no) + ": duplicate movie id " +
                        std::to_string(r.id));
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });

  const auto year_spec = movielens_year_intervals();
  AttributeSchema year_attr{year_spec.attribute, AttributeKind::Categorical, year_spec.labels};
  std::vector<double> known_years;
  bool any_missing = false;
  for (const auto& r : rows) {
    if (r.year) known_years.push_back(*r.year);
    else any_missing = true;
  }
  const auto known_codes = discretize(known_years, year_spec);
  if (any_missing) year_attr.domain.emplace_back(kMissingYear);
  const auto missing_code = static_cast<Code>(year_spec.labels.size());

  std::vector<std::string> names(genres.begin() + 1, genres.end());
  std::vector<std::uint8_t> flags;
  flags.reserve(rows.size() * names.size());
  for (const auto& r : rows) flags.insert(flags.end(), r.flags.begin(), r.flags.end());
  auto scaled = scale_multivalued(flags, rows.size(), names);

  std::vector<AttributeSchema> attrs{std::move(year_attr)};
  attrs.insert(attrs.end(), scaled.attributes.begin(), scaled.attributes.end());
  std::vector<std::string> ids;
  std::vector<Code> values;
  values.reserve(rows.size() * attrs.size());
  std::size_t next_known = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(std::to_string(rows[i].id));
    values.push_back(rows[i].year ? known_codes[next_known++] : missing_code);
    auto genre_row = std::span(scaled.values).subspan(i * names.size(), names.size());
    values.insert(values.end(), genre_row.begin(), genre_row.end());
  }
  return InformationSystem(std::move(ids), std::move(attrs), std::move(values));
}

}  // namespace

Mmer load_movielens(const fs::path& data_dir) {
  Mmer es;
  es.users = load_movielens_users(data_dir / "u.user");
  es.items = load_movielens_items(data_dir / "u.item");
  const fs::path ratings = data_dir / "u.data";
  const std::string text = require_file(ratings);

  std::unordered_map<std::string, std::uint32_t> user_index, item_index;
  for (std::uint32_t i = 0; i < es.users.object_count(); ++i) user_index.emplace(es.users.object_ids()[i], i);
  for (std::uint32_t i = 0; i < es.items.object_count(); ++i) item_index.emplace(es.items.object_ids()[i], i);

  es.relation = BinaryRelation(es.users.object_count(), es.items.object_count());
  std::size_t line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> f;
    for (auto tok : split(line, '\t'))
      if (!trim(tok).empty()) f.push_back(trim(tok));
    if (f.size() != 4)
      throw IngestError("u.data:" + std::to_string(line_no) + ": expected 4 tab-separated fields, got " +
                        std::to_string(f.size()));
    const auto uid = std::to_string(parse_number<long>(f[0], ratings, line_no));
    const auto iid = std::to_string(parse_number<long>(f[1], ratings, line_no));
    parse_number<double>(f[2], ratings, line_no);  // any rating value means "rated"
    auto u = user_index.find(uid);
    if (u == user_index.end())
      throw IngestError("u.data:" + std::to_string(line_no) + ": user " + uid + " not present in u.user");
    auto it = item_index.find(iid);
    if (it == item_index.end())
      throw IngestError("u.data:" + std::to_string(line_no) + ": movie " + iid + " not present in u.item");
    es.relation.add(u->second, it->second);
  }
  return es;
}

// ---------------------------------------------------------------------------
// Generic tabular format

namespace {

constexpr std::string_view kBoolSuffix = ":bool";
constexpr std::string_view kEnumPrefix = ":enum(";

std::vector<std::vector<std::string>> csv_records(const std::string& text, const std::string& name) {
  std::vector<std::vector<std::string>> records;
  std::size_t line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    try {
      records.push_back(detail::parse_csv_line(line));
    } catch (const IngestError& e) {
      throw IngestError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (records.empty()) throw IngestError(name + ": missing header row");
  return records;
}

AttributeSchema parse_header_cell(const std::string& cell, const std::string& file) {
  std::string_view c = cell;
  if (c.size() > kBoolSuffix.size() && c.ends_with(kBoolSuffix))
    return AttributeSchema::boolean_flag(std::string(c.substr(0, c.size() - kBoolSuffix.size())));
  const auto pos = c.find(kEnumPrefix);
  if (pos != std::string_view::npos && c.ends_with(")")) {
    AttributeSchema a{std::string(c.substr(0, pos)), AttributeKind::Categorical, {}};
    auto body = c.substr(pos + kEnumPrefix.size());
    body.remove_suffix(1);
    for (auto label : split(body, '|')) a.domain.emplace_back(label);
    return a;
  }
  if (c.empty()) throw IngestError(file + ": empty attribute name in header");
  return {cell, AttributeKind::Categorical, {}};
}

InformationSystem parse_entity_table(const std::string& text, const std::string& file) {
  auto records = csv_records(text, file);
  const auto& header = records.front();
  if (header.empty()) throw IngestError(file + ": header needs an id column");
  std::vector<AttributeSchema> attrs;
  for (std::size_t i = 1; i < header.size(); ++i) attrs.push_back(parse_header_cell(header[i], file));

  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> labels(attrs.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size())
      throw IngestError(file + ": record " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                        " fields, header has " + std::to_string(header.size()));
    ids.push_back(records[r][0]);
    for (std::size_t a = 0; a < attrs.size(); ++a) labels[a].push_back(records[r][a + 1]);
  }

  std::vector<Code> values(ids.size() * attrs.size());
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    std::vector<Code> codes;
    if (attrs[a].domain.empty()) {
      attrs[a] = categorical_from(attrs[a].name, labels[a], codes);
    } else {
      for (const auto& l : labels[a]) {
        auto code = attrs[a].code_of(l);
        if (!code) throw IngestError(file + ": value '" + l + "' not in domain of '" + attrs[a].name + "'");
        codes.push_back(*code);
      }
    }
    for (std::size_t x = 0; x < ids.size(); ++x) values[x * attrs.size() + a] = codes[x];
  }
  try {
    return InformationSystem(std::move(ids), std::move(attrs), std::move(values));
  } catch (const ContractViolation& e) {
    throw IngestError(file + ": " + e.what());
  }
}

std::string render_entity_table(const InformationSystem& s) {
  std::ostringstream out;
  out << "id";
  for (const auto& a : s.attributes()) {
    std::string cell = a.name;
    if (a.kind == AttributeKind::BooleanFromMultivalue) {
      cell += kBoolSuffix;
    } else {
      cell += kEnumPrefix;
      for (std::size_t i = 0; i < a.domain.size(); ++i) cell += (i ? "|" : "") + a.domain[i];
      cell += ")";
    }
    out << ',' << detail::csv_field(cell);
  }
  out << '\n';
  for (std::size_t x = 0; x < s.object_count(); ++x) {
    out << detail::csv_field(s.object_ids()[x]);
    for (std::size_t a = 0; a < s.attribute_count(); ++a)
      out << ',' << detail::csv_field(s.attribute(a).domain[s.value(x, a)]);
    out << '\n';
  }
  return out.str();
}

}  // namespace

Mmer from_generic_tables(const GenericTables& tables) {
  Mmer es;
  es.users = parse_entity_table(tables.users_csv, "users.csv");
  es.items = parse_entity_table(tables.items_csv, "items.csv");
  std::unordered_map<std::string, std::uint32_t> user_index, item_index;
  for (std::uint32_t i = 0; i < es.users.object_count(); ++i) user_index.emplace(es.users.object_ids()[i], i);
  for (std::uint32_t i = 0; i < es.items.object_count(); ++i) item_index.emplace(es.items.object_ids()[i], i);

  es.relation = BinaryRelation(es.users.object_count(), es.items.object_count());
  auto records = csv_records(tables.edges_csv, "edges.csv");
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 2)
      throw IngestError("edges.csv: record " + std::to_string(r) + " must be userId,itemId");
    auto u = user_index.find(rec[0]);
    if (u == user_index.end()) throw IngestError("edges.csv: user " + rec[0] + " not present in users.csv");
    auto it = item_index.find(rec[1]);
    if (it == item_index.end()) throw IngestError("edges.csv: item " + rec[1] + " not present in items.csv");
    es.relation.add(u->second, it->second);
  }
  return es;
}

Mmer load_generic(const fs::path& data_dir) {
  return from_generic_tables({require_file(data_dir / "users.csv"), require_file(data_dir / "items.csv"),
                              require_file(data_dir / "edges.csv")});
}

GenericTables to_generic_tables(const Mmer& es) {
  es.validate();
  GenericTables t{render_entity_table(es.users), render_entity_table(es.items), {}};
  std::ostringstream edges;
  edges << "userId,itemId\n";
  for (std::size_t x = 0; x < es.relation.source_count(); ++x)
    es.relation.row(x).for_each([&](std::size_t y) {
      edges << detail::csv_field(es.users.object_ids()[x]) << ',' << detail::csv_field(es.items.object_ids()[y])
            << '\n';
    });
  t.edges_csv = edges.str();
  return t;
}

void dump_generic(const Mmer& es, const fs::path& out_dir) {
  auto t = to_generic_tables(es);
  fs::create_directories(out_dir);
  detail::write_file_atomic(out_dir / "users.csv", t.users_csv);
  detail::write_file_atomic(out_dir / "items.csv", t.items_csv);
  detail::write_file_atomic(out_dir / "edges.csv", t.edges_csv);
}

std::string fingerprint(const Mmer& es) {
  const auto t = to_generic_tables(es);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  mix(t.users_csv);
  mix(t.items_csv);
  mix(t.edges_csv);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace grale
