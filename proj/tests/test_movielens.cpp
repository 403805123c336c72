// Checks on the real MovieLens-100K files. Exits 77 (skipped) if absent.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixtures.hpp"
#include "grale/grale.hpp"

using namespace grale;

namespace {

const Mmer& ml() {
  static const Mmer es = load_movielens(fixtures::movielens_dir());
  return es;
}

std::vector<std::vector<std::string>> raw(const std::string& file) {
  std::ifstream in(fixtures::movielens_dir() / file, std::ios::binary);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0, bar;
    while ((bar = line.find('|', start)) != std::string::npos) {
      cells.push_back(line.substr(start, bar - start));
      start = bar + 1;
    }
    cells.push_back(line.substr(start));
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("dataset shape") {
  const Mmer& es = ml();
  CHECK(es.users.object_count() == 943);
  CHECK(es.items.object_count() == 1682);
  CHECK(es.relation.cardinality() == 100000);
  CHECK(es.relation.density() == doctest::Approx(0.0630).epsilon(0.001));
  CHECK(es.users.attribute_count() == 3);
  CHECK(es.items.attribute_count() == 19);
}

TEST_CASE("coverage against raw counts") {
  const Mmer& es = ml();
  std::size_t male_students = 0;
  for (const auto& r : raw("u.user"))
    if (r.size() >= 4 && r[2] == "M" && r[3] == "student") ++male_students;
  std::size_t dramas = 0;
  for (const auto& r : raw("u.item"))
    if (r.size() == 24 && r[5 + 8] == "1") ++dramas;

  const GranularRule rule{parse_descriptor(es.users.attributes(), "gender=M&occupation=student"),
                          parse_descriptor(es.items.attributes(), "Drama=1")};
  CHECK(scov(es, rule) == doctest::Approx(static_cast<double>(male_students) / 943.0));
  CHECK(tcov(es, rule) == doctest::Approx(static_cast<double>(dramas) / 1682.0));
  CHECK(male_students > 0);
  CHECK(dramas > 0);
}

TEST_CASE("generic round-trip preserves the fingerprint") {
  fixtures::TempDir dir;
  dump_generic(ml(), dir.path());
  const Mmer back = load_generic(dir.path());
  CHECK(fingerprint(back) == fingerprint(ml()));
}

int main(int argc, char** argv) {
  if (!std::filesystem::exists(fixtures::movielens_dir() / "u.data")) {
    std::cout << "MovieLens-100K not found at " << fixtures::movielens_dir() << ", skipping\n";
    return 77;
  }
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
