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


#include "weaklab/matcher/soft_matcher.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"

namespace weaklab {
namespace {

// Largest score a non-exact window may reach.
const double kBelowOne = std::nextafter(1.0, 0.0);

bool IsPunctToken(const Token &t) {
  return t.surface.size() == 1 && std::ispunct(static_cast<unsigned char>(t.surface[0]));
}

struct KeywordHit {
  bool found = false;
  size_t pos = 0;
  size_t len = 0;
  double score = 0.0;
};

KeywordHit Locate(const std::vector<double> &scores, size_t len, double floor) {
  KeywordHit h;
  h.len = len;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > h.score) {
      h.score = scores[i];
      h.pos = i;
    }
  }
  h.found = h.score > 0.0 && h.score >= floor;
  return h;
}

size_t KeywordLength(const Clause &c) {
  const Phrase *p = c.keyword();
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, "clause has no keyword");
  return TokenizeLower(p->text).size();
}

// Tokens strictly between two disjoint intervals; 0 when they overlap.
size_t Gap(size_t a_start, size_t a_end, size_t b_start, size_t b_end) {
  if (a_end <= b_start) return b_start - a_end;
  if (b_end <= a_start) return a_start - b_end;
  return 0;
}

double GatedAt(const std::vector<double> &scores, size_t i, double floor) {
  if (i >= scores.size()) return 0.0;
  double s = scores[i];
  return s > 0.0 && s >= floor ? s : 0.0;
}

double ScoreLeaf(const Clause &c, const MatchContext &ctx, const Thresholds &th,
                 const Embeddings &emb) {
  const TokenizedText &sent = *ctx.sentence;
  const std::vector<ArgKind> &kinds = Signature(c.predicate).arg_kinds;
  for (size_t i = 0; i < c.args.size() && i < kinds.size(); ++i) {
    if (const Anchor *a = std::get_if<Anchor>(&c.args[i])) ctx.Require(*a);
  }

  if (c.predicate == Predicate::kAtLeastNWordsBetween) {
    int n = std::get<IntArg>(c.args[0]).value;
    const Span &a = ctx.Require(std::get<Anchor>(c.args[1]));
    const Span &b = ctx.Require(std::get<Anchor>(c.args[2]));
    return DistanceCountScore(static_cast<int>(Gap(a.start, a.end, b.start, b.end)),
                              Comparison::kAtLeast, n);
  }

  const std::string &phrase = c.keyword()->text;
  std::vector<double> scores = StringMatchScores(sent, phrase, emb);
  size_t len = TokenizeLower(phrase).size();

  switch (c.predicate) {
    case Predicate::kContains: {
      KeywordHit hit = Locate(scores, len, th.phrase_sim_floor);
      return hit.found ? hit.score : 0.0;
    }
    case Predicate::kStartsWith: {
      // Leading and trailing punctuation tokens do not count as content.
      size_t first = 0;
      while (first < sent.size() && IsPunctToken(sent.tokens[first])) ++first;
      return GatedAt(scores, first, th.phrase_sim_floor);
    }
    case Predicate::kEndsWith: {
      size_t end = sent.size();
      while (end > 0 && IsPunctToken(sent.tokens[end - 1])) --end;
      if (end < len) return 0.0;
      return GatedAt(scores, end - len, th.phrase_sim_floor);
    }
    case Predicate::kCountOccurrences: {
      int n = std::get<IntArg>(c.args[1]).value;
      int count = 0;
      for (size_t i = 0; i < scores.size(); ++i) {
        if (GatedAt(scores, i, th.phrase_sim_floor) > 0.0) ++count;
      }
      return DistanceCountScore(count, Comparison::kAtLeast, n);
    }
    default:
      break;
  }

  KeywordHit hit = Locate(scores, len, th.phrase_sim_floor);
  if (!hit.found) return 0.0;
  double relation = 0.0;
  if (c.predicate == Predicate::kWithin) {
    int n = std::get<IntArg>(c.args[1]).value;
    const Span &a = ctx.Require(std::get<Anchor>(c.args[2]));
    size_t gap = Gap(hit.pos, hit.pos + hit.len, a.start, a.end);
    relation = DistanceCountScore(static_cast<int>(gap), Comparison::kAtMost, n);
  } else {
    relation = DeterministicScore(c, ctx, hit.pos);
  }
  return std::min(hit.score, relation);
}

double Fold(const Clause &c, const std::vector<double> &leaf_scores, size_t *next) {
  if (c.is_leaf()) {
    if (*next >= leaf_scores.size()) {
      throw Error(ErrorCode::kInvalidArgument, "fewer leaf scores than leaves");
    }
    return std::clamp(leaf_scores[(*next)++], 0.0, 1.0);
  }
  switch (c.predicate) {
    case Predicate::kNot:
      return 1.0 - Fold(c.children.at(0), leaf_scores, next);
    case Predicate::kAnd: {
      double v = 1.0;
      for (const Clause &ch : c.children) v = std::min(v, Fold(ch, leaf_scores, next));
      return v;
    }
    case Predicate::kOr: {
      double v = 0.0;
      for (const Clause &ch : c.children) v = std::max(v, Fold(ch, leaf_scores, next));
      return v;
    }
    default:
      return 0.0;
  }
}

void CollectScores(const Clause &c, const MatchContext &ctx, const Thresholds &th,
                   const Embeddings &emb, std::vector<double> *out) {
  if (c.is_leaf()) {
    out->push_back(ScoreLeaf(c, ctx, th, emb));
    return;
  }
  for (const Clause &ch : c.children) CollectScores(ch, ctx, th, emb, out);
}

}  // namespace

void Thresholds::Check() const {
  if (!(accept >= 0.0 && accept <= 1.0) || !(phrase_sim_floor >= 0.0 && phrase_sim_floor <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must lie in [0, 1]");
  }
}

const Span *MatchContext::Find(Anchor a) const {
  const std::optional<Span> *s = a == Anchor::kSubj ? &subj : a == Anchor::kObj ? &obj : &term;
  return s->has_value() ? &**s : nullptr;
}

const Span &MatchContext::Require(Anchor a) const {
  const Span *s = Find(a);
  if (s == nullptr) {
    throw Error(ErrorCode::kMissingAnchor, "anchor " + std::string(AnchorName(a)) + " is absent");
  }
  return *s;
}

std::vector<double> StringMatchScores(const TokenizedText &sentence, std::string_view keyword,
                                      const Embeddings &embeddings) {
  std::vector<std::string> kw = TokenizeLower(keyword);
  const size_t k = kw.size();
  const size_t n = sentence.size();
  std::vector<double> scores(n, 0.0);
  for (size_t i = 0; i + k <= n; ++i) {
    bool exact = true;
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) {
      const std::string &w = sentence.tokens[i + j].lower;
      if (w == kw[j]) {
        sum += 1.0;
      } else {
        exact = false;
        sum += embeddings.Similarity(kw[j], w);
      }
    }
    scores[i] = exact ? 1.0 : std::min(std::clamp(sum / static_cast<double>(k), 0.0, 1.0), kBelowOne);
  }
  return scores;
}

double DistanceCountScore(int observed, Comparison op, int bound) {
  if (observed < 0 || bound < 0) {
    throw Error(ErrorCode::kInvalidArgument, "distance and bound must be non-negative");
  }
  int violation = 0;
  switch (op) {
    case Comparison::kAtMost: violation = std::max(0, observed - bound); break;
    case Comparison::kAtLeast: violation = std::max(0, bound - observed); break;
    case Comparison::kExactly: violation = std::abs(observed - bound); break;
  }
  if (violation == 0) return 1.0;
  return std::max(0.0, 1.0 - static_cast<double>(violation) / static_cast<double>(bound + 1));
}

double DeterministicScore(const Clause &clause, const MatchContext &ctx, size_t p) {
  size_t k = KeywordLength(clause);
  switch (clause.predicate) {
    case Predicate::kBetween: {
      const Span &a = ctx.Require(std::get<Anchor>(clause.args[1]));
      const Span &b = ctx.Require(std::get<Anchor>(clause.args[2]));
      size_t lo, hi;
      if (a.end <= b.start) {
        lo = a.end;
        hi = b.start;
      } else if (b.end <= a.start) {
        lo = b.end;
        hi = a.start;
      } else {
        return 0.0;
      }
      return p >= lo && p + k <= hi ? 1.0 : 0.0;
    }
    case Predicate::kLeft:
      return p + k <= ctx.Require(std::get<Anchor>(clause.args[1])).start ? 1.0 : 0.0;
    case Predicate::kRight:
      return p >= ctx.Require(std::get<Anchor>(clause.args[1])).end ? 1.0 : 0.0;
    case Predicate::kDirectlyPrecedes:
      return p + k == ctx.Require(std::get<Anchor>(clause.args[1])).start ? 1.0 : 0.0;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(PredicateName(clause.predicate)) + " is not deterministic");
  }
}

double Aggregate(const Clause &root, const std::vector<double> &leaf_scores) {
  size_t next = 0;
  double v = Fold(root, leaf_scores, &next);
  if (next != leaf_scores.size()) {
    throw Error(ErrorCode::kInvalidArgument, "more leaf scores than leaves");
  }
  return v;
}

MatchResult MatchSentence(const LogicalForm &form, const MatchContext &ctx,
                          const Thresholds &thresholds, const Embeddings &embeddings) {
  thresholds.Check();
  if (ctx.sentence == nullptr) throw Error(ErrorCode::kInvalidArgument, "no sentence");
  MatchResult r;
  r.label = form.label;
  CollectScores(form.root, ctx, thresholds, embeddings, &r.clause_scores);
  r.score = Aggregate(form.root, r.clause_scores);
  return r;
}

std::vector<Anchor> RequiredAnchors(const Clause &root) {
  std::vector<Anchor> out;
  for (const Clause *leaf : Leaves(root)) {
    for (const Arg &a : leaf->args) {
      if (const Anchor *x = std::get_if<Anchor>(&a)) {
        if (std::find(out.begin(), out.end(), *x) == out.end()) out.push_back(*x);
      }
    }
  }
  return out;
}

}  // namespace weaklab
