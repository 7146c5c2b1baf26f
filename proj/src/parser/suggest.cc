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

#include "weaklab/parser/suggest.h"

#include <algorithm>
#include <cctype>
#include <map>

#include "internal.h"
#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"
#include "weaklab/parser/parser.h"

namespace weaklab {
namespace {

using parser_internal::Engine;
using parser_internal::Expectation;
using parser_internal::ExpectKind;
using parser_internal::Lex;
using parser_internal::LexKind;
using parser_internal::LexResult;
using parser_internal::LexToken;

// Admissibility tiers, best first.
constexpr int kCompletes = 0;
constexpr int kAdvances = 1;
constexpr int kOpens = 2;

// Placeholder offered where the user must type their own keyword.
constexpr std::string_view kPhrasePlaceholder = "'...'";

struct Candidate {
  std::string text;
  int tier;
  int freq;
};

class Collector {
 public:
  Collector(TaskKind task, const UsageStats *usage, std::string partial)
      : task_(task), usage_(usage), partial_(AsciiLower(partial)) {}

  void Add(std::string text, int tier, int freq) {
    if (text.empty()) return;
    if (!partial_.empty() && AsciiLower(text).rfind(partial_, 0) != 0) return;
    auto it = best_.find(text);
    if (it == best_.end() || tier < it->second.tier ||
        (tier == it->second.tier && freq > it->second.freq)) {
      best_[text] = Candidate{text, tier, freq};
    }
  }

  int PredicateFreq(Predicate p) const {
    if (usage_ == nullptr) return 0;
    auto it = usage_->predicates.find(std::string(PredicateName(p)));
    return it == usage_->predicates.end() ? 0 : it->second;
  }

  void AddPhraseSlot() {
    if (usage_ != nullptr) {
      for (const auto &[phrase, n] : usage_->phrases) {
        Add(phrase.find('\'') == std::string::npos ? "'" + phrase + "'" : "\"" + phrase + "\"",
            kAdvances, n);
      }
    }
    Add(std::string(kPhrasePlaceholder), kAdvances, 0);
  }

  void AddIntSlot() {
    std::map<int, int> counts = {{1, 0}, {2, 0}, {3, 0}, {5, 0}};
    if (usage_ != nullptr) {
      for (const auto &[v, n] : usage_->integers) counts[v] += n;
    }
    static const char *kWords[] = {"zero", "one", "two", "three", "four", "five",
                                   "six",  "seven", "eight", "nine", "ten"};
    bool alpha = !partial_.empty() && std::isalpha(static_cast<unsigned char>(partial_[0]));
    if (alpha) {
      for (int v = 0; v <= 10; ++v) Add(kWords[v], kAdvances, counts.count(v) ? counts[v] : 0);
      return;
    }
    for (const auto &[v, n] : counts) Add(std::to_string(v), kAdvances, n);
  }

  // Expands template items [from, end). Anchors branch over the anchors the
  // task allows that this clause has not used yet; phrase and integer slots
  // stop the expansion because the user has to type them.
  void AddRemainder(const SurfaceTemplate &t, size_t from, std::vector<Anchor> used) {
    if (from >= t.items.size()) return;
    const TemplateItem &first = t.items[from];
    if (first.kind == ItemKind::kPhrase) return AddPhraseSlot();
    if (first.kind == ItemKind::kInt) return AddIntSlot();
    Expand(t, from, "", std::move(used), /*at_first_slot=*/true);
  }

  std::vector<std::string> Ranked() const {
    std::vector<Candidate> all;
    for (const auto &[_, c] : best_) all.push_back(c);
    std::sort(all.begin(), all.end(), [](const Candidate &a, const Candidate &b) {
      if (a.tier != b.tier) return a.tier < b.tier;
      if (a.freq != b.freq) return a.freq > b.freq;
      return a.text < b.text;
    });
    std::vector<std::string> out;
    for (const Candidate &c : all) out.push_back(c.text);
    return out;
  }

  TaskKind task() const { return task_; }

 private:
  void Expand(const SurfaceTemplate &t, size_t k, std::string acc, std::vector<Anchor> used,
              bool at_first_slot) {
    int freq = PredicateFreq(t.predicate);
    for (; k < t.items.size(); ++k) {
      const TemplateItem &item = t.items[k];
      if (item.kind == ItemKind::kKeyword || item.kind == ItemKind::kStop) {
        acc += (acc.empty() ? "" : " ") + item.word;
        continue;
      }
      if (at_first_slot) Add(acc, kAdvances, freq);
      if (item.kind != ItemKind::kAnchor) return;
      for (Anchor a : TaskAnchors(task_)) {
        if (std::find(used.begin(), used.end(), a) != used.end()) continue;
        std::vector<Anchor> next_used = used;
        next_used.push_back(a);
        Expand(t, k + 1, acc + (acc.empty() ? "" : " ") + std::string(AnchorName(a)),
               std::move(next_used), /*at_first_slot=*/false);
      }
      return;
    }
    Add(acc, kCompletes, freq);
  }

  TaskKind task_;
  const UsageStats *usage_;
  std::string partial_;
  std::map<std::string, Candidate> best_;
};

// Matches glue tokens strictly against a clause-initial template: every
// token must equal the next item. Returns the item index reached, or -1.
int MatchOpener(const SurfaceTemplate &t, const std::vector<LexToken> &toks, size_t from) {
  size_t k = 0;
  for (size_t i = from; i < toks.size(); ++i) {
    const LexToken &tok = toks[i];
    if (tok.kind == LexKind::kPunct) continue;
    while (k < t.items.size() && t.items[k].kind == ItemKind::kStop &&
           !(tok.kind == LexKind::kWord && tok.text == t.items[k].word)) {
      ++k;
    }
    if (k >= t.items.size()) return -1;
    const TemplateItem &item = t.items[k];
    if ((item.kind != ItemKind::kKeyword && item.kind != ItemKind::kStop) ||
        tok.kind != LexKind::kWord || tok.text != item.word) {
      return -1;
    }
    ++k;
  }
  return static_cast<int>(k);
}

void AddClauseStart(const Expectation &e, const std::vector<LexToken> &toks, Collector *out) {
  if (e.glue_begin >= toks.size()) {
    out->Add("the word", kAdvances, 0);
    out->Add("the phrase", kAdvances, 0);
    out->Add("there are", kAdvances, out->PredicateFreq(Predicate::kAtLeastNWordsBetween));
    out->Add("not", kOpens, out->PredicateFreq(Predicate::kNot));
    return;
  }
  auto try_template = [&](const SurfaceTemplate &t) {
    int k = MatchOpener(t, toks, e.glue_begin);
    if (k < 0) return;
    out->AddRemainder(t, static_cast<size_t>(k), {});
  };
  for (const SurfaceTemplate &t : OpenerTemplates()) try_template(t);
  for (const SurfaceTemplate &t : Templates()) {
    if (!t.phrase_initial()) try_template(t);
  }
}

bool Parses(std::string_view text, TaskKind task) {
  try {
    Parse(text, task, "");
    return true;
  } catch (const Error &) {
    return false;
  }
}

}  // namespace

void UsageStats::Record(const LogicalForm &form) {
  std::vector<const Clause *> stack = {&form.root};
  while (!stack.empty()) {
    const Clause *c = stack.back();
    stack.pop_back();
    ++predicates[std::string(PredicateName(c->predicate))];
    for (const Arg &a : c->args) {
      if (const auto *p = std::get_if<Phrase>(&a)) ++phrases[p->text];
      if (const auto *n = std::get_if<IntArg>(&a)) ++integers[n->value];
    }
    for (const Clause &child : c->children) stack.push_back(&child);
  }
}

std::vector<std::string> Suggest(std::string_view text, size_t cursor, TaskKind task,
                                 const UsageStats *usage) {
  std::string_view prefix = text.substr(0, std::min(cursor, text.size()));
  if (!Trim(prefix).empty() && Parses(prefix, task)) return {};

  LexResult lexed = Lex(prefix);
  if (lexed.open_quote) {
    std::string_view body = prefix.substr(lexed.open_quote_begin);
    size_t mark = static_cast<unsigned char>(body[0]) >= 0x80 ? 3 : 1;  // curly marks are 3 bytes
    if (Trim(body.substr(std::min(mark, body.size()))).empty()) return {"..." + lexed.close_quote};
    return {lexed.close_quote};
  }

  std::vector<LexToken> toks = lexed.tokens;
  std::string partial;
  if (!toks.empty() && toks.back().end == prefix.size() &&
      (toks.back().kind == LexKind::kWord || toks.back().kind == LexKind::kInt)) {
    partial = toks.back().raw;
    toks.pop_back();
  }

  Collector out(task, usage, partial);

  Engine engine(toks, task, /*collect=*/true);
  if (engine.ParseAll()) {
    // Everything before the partial word is complete; only a connective
    // can follow.
    if (!partial.empty()) {
      out.Add("and", kAdvances, out.PredicateFreq(Predicate::kAnd));
      out.Add("or", kAdvances, out.PredicateFreq(Predicate::kOr));
    }
    return out.Ranked();
  }
  // Expectations only count when the parse ran out of input; an earlier
  // mismatch means the prefix is already ungrammatical.
  if (engine.fail_index() < toks.size()) return {};

  for (const Expectation &e : engine.expectations()) {
    switch (e.kind) {
      case ExpectKind::kClauseStart:
        AddClauseStart(e, toks, &out);
        break;
      case ExpectKind::kTemplate: {
        out.AddRemainder(*e.tmpl, e.item, e.used_anchors);
        // Let a partial word skip over optional leading glue ("bet" ->
        // "between ..." as well as "is between ...").
        size_t k = e.item;
        while (k < e.tmpl->items.size() && e.tmpl->items[k].kind == ItemKind::kStop) ++k;
        if (k != e.item) out.AddRemainder(*e.tmpl, k, e.used_anchors);
        break;
      }
      case ExpectKind::kCloseParen:
        out.Add(")", kCompletes, 0);
        out.Add("and", kAdvances, out.PredicateFreq(Predicate::kAnd));
        out.Add("or", kAdvances, out.PredicateFreq(Predicate::kOr));
        break;
    }
  }
  return out.Ranked();
}

std::string ApplySuggestion(std::string_view prefix, std::string_view suggestion) {
  LexResult lexed = Lex(prefix);
  std::string out(prefix);
  if (lexed.open_quote) return Trim(out) + std::string(suggestion) + " ";
  if (!lexed.tokens.empty() && lexed.tokens.back().end == prefix.size() &&
      (lexed.tokens.back().kind == LexKind::kWord || lexed.tokens.back().kind == LexKind::kInt)) {
    out.resize(lexed.tokens.back().begin);
  } else if (!out.empty() && !std::isspace(static_cast<unsigned char>(out.back()))) {
    out += ' ';
  }
  return out + std::string(suggestion) + " ";
}

}  // namespace weaklab
