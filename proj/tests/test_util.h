// Copyright 2026 The Weaklab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef WEAKLAB_TESTS_TEST_UTIL_H_
#define WEAKLAB_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "weaklab/core/tokenizer.h"
#include "weaklab/core/types.h"

namespace weaklab::testing {

inline std::string TestDataPath(const std::string &name) {
  return std::string(WEAKLAB_TEST_DATA) + "/" + name;
}

inline std::string DataPath(const std::string &name) {
  return std::string(WEAKLAB_DATA) + "/" + name;
}

inline std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GoldenExplanation {
  TaskKind task;
  std::string label;
  std::string text;
  std::string form;  // compact notation
};

inline std::vector<GoldenExplanation> LoadGolden() {
  auto j = nlohmann::json::parse(ReadFile(TestDataPath("golden_explanations.json")));
  std::vector<GoldenExplanation> out;
  for (const auto &e : j) {
    out.push_back({*TaskFromName(e.at("task").get<std::string>()), e.at("label"),
                   e.at("text"), e.at("form")});
  }
  return out;
}

inline Document MakeDoc(DocId id, const std::string &text) {
  Document d;
  d.id = id;
  d.content = Tokenize(text);
  return d;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("weaklab_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace weaklab::testing

#endif  // WEAKLAB_TESTS_TEST_UTIL_H_
