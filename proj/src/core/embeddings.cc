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

#include "weaklab/core/embeddings.h"

#include <fstream>
#include <sstream>

#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"

namespace weaklab {

Embeddings Embeddings::Load(std::istream &in) {
  Embeddings e;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    std::string token;
    fields >> token;
    Vec v;
    double x;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) throw RecordError(line_no, "non-numeric vector component");
    if (v.empty()) throw RecordError(line_no, "token without vector");
    if (e.dim_ == 0) e.dim_ = v.size();
    if (v.size() != e.dim_) {
      throw RecordError(line_no, "expected " + std::to_string(e.dim_) + " components, got " +
                                     std::to_string(v.size()));
    }
    e.Add(token, std::move(v));
  }
  return e;
}

Embeddings Embeddings::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open embedding file " + path);
  return Load(in);
}

void Embeddings::Add(std::string_view token, Vec vector) {
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding dimension mismatch");
  }
  std::string key = AsciiLower(token);
  auto [it, inserted] = table_.insert_or_assign(key, std::move(vector));
  if (inserted) order_.push_back(key);
}

const Vec *Embeddings::Find(std::string_view token) const {
  auto it = table_.find(std::string(token));
  if (it == table_.end()) it = table_.find(AsciiLower(token));
  return it == table_.end() ? nullptr : &it->second;
}

double Embeddings::Similarity(std::string_view a, std::string_view b) const {
  const Vec *va = Find(a);
  const Vec *vb = Find(b);
  if (va == nullptr || vb == nullptr) return 0.0;
  return Cosine(*va, *vb);
}

}  // namespace weaklab
