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


#include "weaklab/service/candidates.h"

#include <cctype>
#include <set>
#include <string>

namespace weaklab {
namespace {

bool Capitalized(const Token &t) {
  unsigned char c = static_cast<unsigned char>(t.surface[0]);
  return std::isupper(c) || std::isdigit(c);
}

bool FunctionWord(const std::string &lower) {
  static const std::set<std::string> kWords = {
      "a",  "an", "the", "this", "that", "these", "those", "we",  "he",   "she",  "they",
      "it", "my", "our", "your", "his",  "her",   "their", "in",  "on",   "at",   "after",
      "if", "as", "when", "while", "there", "then", "but", "and", "or", "so", "yesterday", "today"};
  return kWords.count(lower) > 0;
}

size_t ToIndex(std::string_view s, bool *ok) {
  if (s.empty()) {
    *ok = false;
    return 0;
  }
  size_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      *ok = false;
      return 0;
    }
    v = v * 10 + static_cast<size_t>(c - '0');
  }
  return v;
}

}  // namespace

std::optional<std::vector<Span>> ParseSpanList(std::string_view text, DocId doc,
                                               size_t token_count) {
  std::vector<Span> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    size_t dash = item.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    bool ok = true;
    size_t s = ToIndex(item.substr(0, dash), &ok), e = ToIndex(item.substr(dash + 1), &ok);
    if (!ok || s >= e || e > token_count) return std::nullopt;
    out.push_back(Span{doc, s, e});
    pos = comma + 1;
  }
  return out;
}

std::vector<Span> CandidateSpans(const Document &doc) {
  auto meta = doc.meta.find("entities");
  if (meta != doc.meta.end()) {
    if (auto spans = ParseSpanList(meta->second, doc.id, doc.tokens().size())) return *spans;
  }
  std::vector<Span> out;
  const auto &toks = doc.tokens();
  size_t i = 0;
  while (i < toks.size()) {
    if (!Capitalized(toks[i]) || toks[i].surface == "I") {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < toks.size() && Capitalized(toks[j]) && toks[j].surface != "I") ++j;
    bool lone_opener = i == 0 && j == 1 && FunctionWord(toks[0].lower);
    if (!lone_opener) out.push_back(Span{doc.id, i, j});
    i = j;
  }
  return out;
}

std::vector<MatchInstance> CandidateInstances(const Document &doc, TaskKind task) {
  std::vector<MatchInstance> out;
  auto base = [&] {
    MatchInstance m;
    m.doc_id = doc.id;
    m.ctx.sentence = &doc.content;
    return m;
  };
  if (task == TaskKind::kSentimentAnalysis) {
    MatchInstance m = base();
    auto term = doc.meta.find("term");
    if (term != doc.meta.end()) {
      auto spans = ParseSpanList(term->second, doc.id, doc.tokens().size());
      if (spans && spans->size() == 1) m.ctx.term = spans->front();
    }
    out.push_back(m);
    return out;
  }
  std::vector<Span> spans = CandidateSpans(doc);
  if (task == TaskKind::kSequenceLabeling) {
    for (const Span &s : spans) {
      MatchInstance m = base();
      m.ctx.term = s;
      out.push_back(m);
    }
    return out;
  }
  // Pairs in textual order: SUBJ precedes OBJ, matching how explanations
  // phrase direction.
  for (const Span &a : spans) {
    for (const Span &b : spans) {
      if (a.Overlaps(b) || b.start < a.end) continue;
      MatchInstance m = base();
      m.ctx.subj = a;
      m.ctx.obj = b;
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace weaklab
