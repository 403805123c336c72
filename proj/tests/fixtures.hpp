#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "grale/mmer.hpp"

namespace fixtures {

/// The four displayed rows of the user table: ids 1, 2, 3, 943.
inline grale::InformationSystem table_users() {
  using grale::AttributeKind;
  std::vector<grale::AttributeSchema> attrs{
      {"age", AttributeKind::Categorical, {"[18,24]", "[50,55]"}},
      {"gender", AttributeKind::Categorical, {"F", "M"}},
      {"occupation", AttributeKind::Categorical, {"other", "student", "technician", "writer"}}};
  return {{"1", "2", "3", "943"},
          attrs,
          {0, 1, 2,  //
           1, 0, 0,  //
           0, 1, 3,  //
           0, 1, 1}};
}

/// Two users (M, F) and three items, the first two of them dramas.
inline grale::Mmer drama_toy() {
  using grale::AttributeKind;
  grale::InformationSystem users({"m", "f"}, {{"gender", AttributeKind::Categorical, {"F", "M"}}}, {1, 0});
  grale::InformationSystem items({"d1", "d2", "c1"}, {grale::AttributeSchema::boolean_flag("Drama")}, {1, 1, 0});
  grale::BinaryRelation r(2, 3);
  r.add(0, 0);  // the male user rated one of the two dramas
  r.add(1, 2);
  return {users, items, r};
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("grale-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  void write(const std::string& name, const std::string& contents) const {
    std::ofstream(path_ / name) << contents;
  }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path movielens_dir() {
  if (const char* env = std::getenv("GRALE_DATA_DIR")) return env;
  return GRALE_DEFAULT_DATA_DIR;
}

}  // namespace fixtures
