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


#include "weaklab/models/features.h"

#include <algorithm>
#include <cctype>
#include <map>

namespace weaklab {
namespace {

std::string Context(const TokenizedText &t, long i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<long>(t.size())) return "</s>";
  return t.tokens[static_cast<size_t>(i)].lower;
}

// Accumulates named binary features, hashed into a fixed range.
class Bag {
 public:
  explicit Bag(size_t buckets) : buckets_(buckets) {}
  void Add(const std::string &name) { ids_[FeatureId(name) % buckets_] = 1.0; }
  void Set(uint64_t id, double v) { ids_[id] = v; }
  FeatureVec Take() const {
    FeatureVec out;
    for (const auto &[id, v] : ids_) out.push_back({id, v});
    return out;
  }

 private:
  size_t buckets_;
  std::map<uint64_t, double> ids_;
};

}  // namespace

std::string TokenShape(std::string_view surface) {
  std::string out;
  for (unsigned char c : surface) {
    char k = std::isupper(c) ? 'X' : std::islower(c) ? 'x' : std::isdigit(c) ? 'd'
             : c >= 0x80 ? 'u' : static_cast<char>(c);
    if (out.empty() || out.back() != k) out += k;
  }
  return out;
}

FeatureSeq TokenFeatures(const TokenizedText &text, const Embeddings *embeddings) {
  FeatureSeq seq;
  seq.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    const Token &tok = text.tokens[i];
    const long li = static_cast<long>(i);
    FeatureVec f;
    auto add = [&f](const std::string &name) { f.push_back({FeatureId(name), 1.0}); };
    add("bias");
    add("w=" + tok.lower);
    add("shape=" + TokenShape(tok.surface));
    add("pre3=" + tok.lower.substr(0, 3));
    add("suf3=" + (tok.lower.size() > 3 ? tok.lower.substr(tok.lower.size() - 3) : tok.lower));
    add("w-1=" + Context(text, li - 1));
    add("w-2=" + Context(text, li - 2));
    add("w+1=" + Context(text, li + 1));
    add("w+2=" + Context(text, li + 2));
    add("w-1|w=" + Context(text, li - 1) + "|" + tok.lower);
    if (embeddings != nullptr) {
      if (const Vec *v = embeddings->Find(tok.lower)) {
        for (size_t d = 0; d < v->size(); ++d) {
          f.push_back({FeatureId("emb:" + std::to_string(d)), (*v)[d]});
        }
      }
    }
    seq.push_back(std::move(f));
  }
  return seq;
}

FeatureVec ClassifierFeatures(const TokenizedText &text, const InstanceAnchors &anchors,
                              const Embeddings *embeddings, size_t buckets) {
  Bag bag(buckets);
  for (const Token &t : text.tokens) bag.Add("bow=" + t.lower);

  auto window = [&](const char *tag, size_t from, size_t to) {
    for (size_t i = from; i < to && i < text.size(); ++i) {
      bag.Add(std::string(tag) + text.tokens[i].lower);
    }
  };
  if (anchors.subj && anchors.obj) {
    const Span &s = *anchors.subj;
    const Span &o = *anchors.obj;
    window("subj=", s.start, s.end);
    window("obj=", o.start, o.end);
    bool subj_first = s.end <= o.start;
    size_t lo = subj_first ? s.end : o.end;
    size_t hi = subj_first ? o.start : s.start;
    bag.Add(subj_first ? "order=subj_obj" : "order=obj_subj");
    if (lo <= hi) {
      window("between=", lo, hi);
      bag.Add("gap=" + std::to_string(std::min<size_t>(hi - lo, 6)));
      for (size_t i = lo; i + 1 < hi; ++i) {
        bag.Add("between2=" + text.tokens[i].lower + "_" + text.tokens[i + 1].lower);
      }
    }
  }
  if (anchors.term) {
    const Span &t = *anchors.term;
    window("term=", t.start, t.end);
    window("near=", t.start >= 3 ? t.start - 3 : 0, t.start);
    window("near=", t.end, t.end + 3);
    if (t.start > 0) bag.Add("left1=" + text.tokens[t.start - 1].lower);
    if (t.end < text.size()) bag.Add("right1=" + text.tokens[t.end].lower);
  }

  if (embeddings != nullptr && embeddings->dim() > 0) {
    Vec mean(embeddings->dim(), 0.0);
    int hits = 0;
    for (const Token &t : text.tokens) {
      if (const Vec *v = embeddings->Find(t.lower)) {
        Axpy(1.0, *v, mean);
        ++hits;
      }
    }
    if (hits > 0) {
      for (size_t d = 0; d < mean.size(); ++d) bag.Set(buckets + d, mean[d] / hits);
    }
  }
  return bag.Take();
}

}  // namespace weaklab
