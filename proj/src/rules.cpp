#include "grale/rules.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "grale/error.hpp"
#include "parallel.hpp"
#include "text.hpp"

namespace grale {

namespace {

constexpr std::string_view kVersionLine = "#grale-rules v1";
constexpr std::string_view kArrow = " => ";

double ratio(std::size_t num, std::size_t den) { return static_cast<double>(num) / static_cast<double>(den); }

bool confident(std::size_t hits, std::size_t target_size, double tc) { return ratio(hits, target_size) >= tc; }

RuleMeasures from_counts(std::size_t lh, std::size_t rh, std::size_t conf, std::size_t users, std::size_t items,
                         double tc) {
  RuleMeasures m;
  m.scov = ratio(lh, users);
  m.tcov = ratio(rh, items);
  m.sconf = lh == 0 ? 0.0 : ratio(conf, lh);
  m.tc = tc;
  m.source_size = lh;
  m.target_size = rh;
  m.confident_sources = conf;
  return m;
}

void check_rule(const Mmer& es, const GranularRule& rule) {
  validate_descriptor(es.users, rule.source);
  validate_descriptor(es.items, rule.target);
}

}  // namespace

void MiningParams::validate() const {
  auto open_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  auto closed_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!open_unit(ms) || !open_unit(mt))
    throw ContractViolation("coverage thresholds ms, mt must lie in (0, 1]");
  if (!closed_unit(sc) || !closed_unit(tc))
    throw ContractViolation("confidence thresholds sc, tc must lie in [0, 1]");
}

double scov(const Mmer& es, const GranularRule& rule) { return support(es.users, rule.source); }

double tcov(const Mmer& es, const GranularRule& rule) { return support(es.items, rule.target); }

double sconf(const Mmer& es, const GranularRule& rule, double tc) {
  return measure(es, rule, tc).sconf;
}

RuleMeasures measure(const Mmer& es, const GranularRule& rule, double tc) {
  es.validate();
  check_rule(es, rule);
  const Bitset lh = extent(es.users, rule.source);
  const Bitset rh = extent(es.items, rule.target);
  const std::size_t lh_size = lh.count();
  const std::size_t rh_size = rh.count();
  if (lh_size == 0 || rh_size == 0)
    throw ContractViolation("source confidence needs non-empty LH and RH");
  std::size_t conf = 0;
  lh.for_each([&](std::size_t x) {
    if (confident(es.relation.row(x).intersect_count(rh), rh_size, tc)) ++conf;
  });
  return from_counts(lh_size, rh_size, conf, es.users.object_count(), es.items.object_count(), tc);
}

RuleSet mine(const Mmer& es, const MiningParams& params, unsigned workers) {
  params.validate();
  es.validate();
  RuleSet rs;
  rs.params = params;
  rs.fingerprint = fingerprint(es);
  rs.user_count = es.users.object_count();
  rs.item_count = es.items.object_count();
  rs.user_attributes = es.users.attributes();
  rs.item_attributes = es.items.attributes();
  if (rs.user_count == 0 || rs.item_count == 0) return rs;

  const GranuleSet sources = enumerate_granules(es.users, params.ms, workers);
  const GranuleSet targets = enumerate_granules(es.items, params.mt, workers);

  // For every target granule, the users who rate at least a tc-fraction of it.
  std::vector<Bitset> qualified(targets.size());
  std::vector<std::size_t> target_sizes(targets.size());
  detail::parallel_for(targets.size(), workers, [&](std::size_t t) {
    const Bitset& rh = targets.granules[t].extent;
    const std::size_t rh_size = rh.count();
    Bitset q(rs.user_count);
    for (std::size_t x = 0; x < rs.user_count; ++x)
      if (confident(es.relation.row(x).intersect_count(rh), rh_size, params.tc)) q.set(x);
    qualified[t] = std::move(q);
    target_sizes[t] = rh_size;
  });

  std::vector<std::vector<MinedRule>> per_source(sources.size());
  detail::parallel_for(sources.size(), workers, [&](std::size_t s) {
    const Granule& src = sources.granules[s];
    const std::size_t lh_size = src.extent.count();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const std::size_t conf = src.extent.intersect_count(qualified[t]);
      if (ratio(conf, lh_size) >= params.sc)
        per_source[s].push_back({{src.descriptor, targets.granules[t].descriptor},
                                 from_counts(lh_size, target_sizes[t], conf, rs.user_count, rs.item_count,
                                             params.tc)});
    }
  });
  for (auto& chunk : per_source)
    for (auto& r : chunk) rs.rules.push_back(std::move(r));
  return rs;
}

std::string rule_tag(const GranularRule& rule) {
  if (rule.source.empty() && rule.target.empty()) return "empty-both";
  if (rule.source.empty()) return "empty-source";
  if (rule.target.empty()) return "empty-target";
  return {};
}

std::string format_rules(const RuleSet& rs) {
  using detail::format_exact;
  using detail::format_fixed;
  std::ostringstream out;
  out << kVersionLine << '\n';
  out << "#ms=" << format_exact(rs.params.ms) << ",mt=" << format_exact(rs.params.mt)
      << ",sc=" << format_exact(rs.params.sc) << ",tc=" << format_exact(rs.params.tc)
      << ",fingerprint=" << rs.fingerprint << ",users=" << rs.user_count << ",items=" << rs.item_count
      << ",rules=" << rs.rules.size() << '\n';
  for (const auto& r : rs.rules) {
    out << format_descriptor(rs.user_attributes, r.rule.source) << kArrow
        << format_descriptor(rs.item_attributes, r.rule.target) << '\t' << format_fixed(r.measures.scov, 6)
        << '\t' << format_fixed(r.measures.tcov, 6) << '\t' << format_fixed(r.measures.sconf, 6);
    if (auto tag = rule_tag(r.rule); !tag.empty()) out << '\t' << tag;
    out << '\n';
  }
  return out.str();
}

void save_rules(const RuleSet& rs, const std::filesystem::path& path) {
  detail::write_file_atomic(path, format_rules(rs));
}

LoadedRules parse_rules(std::string_view text, const Mmer& es) {
  auto lines = detail::split(text, '\n');
  if (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty() || detail::trim(lines[0]) != kVersionLine)
    throw RuleFileError("rule file does not start with '" + std::string(kVersionLine) + "'");
  if (lines.size() < 2 || !lines[1].starts_with("#ms="))
    throw RuleFileError("rule file lacks the parameter header line");

  std::map<std::string, std::string, std::less<>> header;
  for (auto kv : detail::split(detail::trim(lines[1].substr(1)), ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw RuleFileError("malformed header entry '" + std::string(kv) + "'");
    header.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  auto field = [&](std::string_view key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw RuleFileError("rule header lacks '" + std::string(key) + "'");
    return it->second;
  };
  auto number = [&](std::string_view key) {
    const std::string& v = field(key);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
      throw RuleFileError("rule header '" + std::string(key) + "' is not a number");
    return d;
  };

  LoadedRules out;
  RuleSet& rs = out.rules;
  rs.params = {number("ms"), number("mt"), number("sc"), number("tc")};
  rs.fingerprint = field("fingerprint");
  rs.user_count = static_cast<std::size_t>(number("users"));
  rs.item_count = static_cast<std::size_t>(number("items"));
  rs.user_attributes = es.users.attributes();
  rs.item_attributes = es.items.attributes();

  if (const auto fp = fingerprint(es); fp != rs.fingerprint)
    out.warnings.push_back("rule file was mined from dataset " + rs.fingerprint + ", current dataset is " + fp);
  if (rs.user_count == 0 || rs.item_count == 0) {
    if (lines.size() > 2) throw RuleFileError("rules present for an empty universe");
    return out;
  }

  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto cols = detail::split(line, '\t');
    const auto arrow = cols[0].find(kArrow);
    if (cols.size() < 4 || arrow == std::string_view::npos)
      throw RuleFileError("rule line " + std::to_string(i + 1) + " is malformed");
    MinedRule r;
    r.rule.source = parse_descriptor(rs.user_attributes, cols[0].substr(0, arrow));
    r.rule.target = parse_descriptor(rs.item_attributes, cols[0].substr(arrow + kArrow.size()));
    const double scov_v = std::strtod(std::string(cols[1]).c_str(), nullptr);
    const double tcov_v = std::strtod(std::string(cols[2]).c_str(), nullptr);
    const double sconf_v = std::strtod(std::string(cols[3]).c_str(), nullptr);
    // Six decimals pin the integer counts exactly while the universe stays below 5*10^5.
    const auto lh = static_cast<std::size_t>(std::llround(scov_v * static_cast<double>(rs.user_count)));
    const auto rh = static_cast<std::size_t>(std::llround(tcov_v * static_cast<double>(rs.item_count)));
    const auto conf = static_cast<std::size_t>(std::llround(sconf_v * static_cast<double>(lh)));
    r.measures = from_counts(lh, rh, conf, rs.user_count, rs.item_count, rs.params.tc);
    rs.rules.push_back(std::move(r));
  }
  return out;
}

LoadedRules load_rules(const std::filesystem::path& path, const Mmer& es) {
  return parse_rules(detail::read_file(path), es);
}

}  // namespace grale
