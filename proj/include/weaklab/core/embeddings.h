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

#ifndef WEAKLAB_CORE_EMBEDDINGS_H_
#define WEAKLAB_CORE_EMBEDDINGS_H_

#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "weaklab/core/vec.h"

namespace weaklab {

// Read-only word vector table keyed by lowercased token.
//
// File format: one entry per line, a token followed by `dim` real numbers,
// separated by whitespace. Blank lines and lines starting with '#' are
// skipped. All rows must have the same dimension.
class Embeddings {
 public:
  Embeddings() = default;
  explicit Embeddings(size_t dim) : dim_(dim) {}

  static Embeddings Load(std::istream &in);
  static Embeddings LoadFile(const std::string &path);

  void Add(std::string_view token, Vec vector);

  // nullptr for out-of-vocabulary tokens.
  const Vec *Find(std::string_view token) const;

  // Cosine similarity; 0 when either token is out of vocabulary.
  double Similarity(std::string_view a, std::string_view b) const;

  size_t dim() const { return dim_; }
  size_t size() const { return table_.size(); }
  bool empty() const { return table_.empty(); }
  const std::vector<std::string> &tokens() const { return order_; }

 private:
  size_t dim_ = 0;
  std::unordered_map<std::string, Vec> table_;
  std::vector<std::string> order_;
};

}  // namespace weaklab

#endif  // WEAKLAB_CORE_EMBEDDINGS_H_
