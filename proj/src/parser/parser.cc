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

#include "weaklab/parser/parser.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "internal.h"
#include "weaklab/core/error.h"
#include "weaklab/core/tokenizer.h"

namespace weaklab {
namespace parser_internal {
namespace {

constexpr std::array<std::string_view, 11> kNumberWords = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool IsWordByte(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_' || c == '-' || c == '\'';
}

// Quote marks recognized at the start of a phrase. Curly quotes are three
// UTF-8 bytes.
struct QuoteMark {
  std::string_view open;
  bool single;
};
constexpr std::array<QuoteMark, 7> kOpeners = {{
    {"'", true}, {"`", true}, {"\xE2\x80\x98", true}, {"\xE2\x80\x99", true},
    {"\"", false}, {"\xE2\x80\x9C", false}, {"\xE2\x80\x9D", false},
}};

bool StartsWith(std::string_view s, size_t at, std::string_view p) {
  return s.substr(at, p.size()) == p;
}

// Finds the closing quote for a phrase opened before `from`. Returns npos if
// none. Sets `len` to the byte length of the closing mark.
size_t FindClose(std::string_view text, size_t from, bool single, size_t *len) {
  for (size_t i = from; i < text.size(); ++i) {
    std::string_view marks[3];
    if (single) {
      marks[0] = "'";
      marks[1] = "\xE2\x80\x99";
      marks[2] = "`";
    } else {
      marks[0] = "\"";
      marks[1] = "\xE2\x80\x9D";
      marks[2] = "\xE2\x80\x9C";
    }
    for (std::string_view m : marks) {
      if (!StartsWith(text, i, m)) continue;
      size_t after = i + m.size();
      // An apostrophe inside a word ("don't") is not a closing quote.
      if (single && after < text.size() &&
          std::isalnum(static_cast<unsigned char>(text[after]))) {
        continue;
      }
      *len = m.size();
      return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace

LexResult Lex(std::string_view text) {
  LexResult r;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    const QuoteMark *quote = nullptr;
    for (const QuoteMark &q : kOpeners) {
      if (StartsWith(text, i, q.open)) {
        quote = &q;
        break;
      }
    }
    if (quote != nullptr) {
      size_t body = i + quote->open.size();
      size_t close_len = 0;
      size_t close = FindClose(text, body, quote->single, &close_len);
      if (close == std::string_view::npos) {
        r.open_quote = true;
        r.open_quote_begin = i;
        r.close_quote = quote->single ? (quote->open == "'" || quote->open == "`" ? "'" : "\xE2\x80\x99")
                                      : (quote->open == "\"" ? "\"" : "\xE2\x80\x9D");
        return r;
      }
      LexToken t{LexKind::kPhrase, Trim(text.substr(body, close - body)),
                 std::string(text.substr(i, close + close_len - i)), 0, i, close + close_len};
      r.tokens.push_back(std::move(t));
      i = close + close_len;
      continue;
    }
    if (c == '(' || c == ')') {
      r.tokens.push_back({c == '(' ? LexKind::kLParen : LexKind::kRParen, std::string(1, c),
                          std::string(1, c), 0, i, i + 1});
      ++i;
      continue;
    }
    if (IsWordByte(c) && c != '\'' && c != '-') {
      size_t j = i;
      while (j < text.size() && IsWordByte(text[j])) ++j;
      std::string raw(text.substr(i, j - i));
      std::string lower = AsciiLower(raw);
      LexToken t{LexKind::kWord, lower, raw, 0, i, j};
      if (std::all_of(raw.begin(), raw.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        t.kind = LexKind::kInt;
        t.value = raw.size() > 9 ? -1 : std::stoi(raw);
      } else {
        auto it = std::find(kNumberWords.begin(), kNumberWords.end(), lower);
        if (it != kNumberWords.end()) {
          t.kind = LexKind::kInt;
          t.value = static_cast<int>(it - kNumberWords.begin());
        }
      }
      r.tokens.push_back(std::move(t));
      i = j;
      continue;
    }
    // Any other single byte (or stray multibyte lead) is punctuation glue.
    size_t j = i + 1;
    while (j < text.size() && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) ++j;
    r.tokens.push_back({LexKind::kPunct, std::string(text.substr(i, j - i)),
                        std::string(text.substr(i, j - i)), 0, i, j});
    i = j;
  }
  return r;
}

bool IsGlue(const LexToken &t) {
  return t.kind == LexKind::kPunct || (t.kind == LexKind::kWord && IsStopWord(t.text));
}

void Engine::Fail(size_t index) { fail_index_ = std::max(fail_index_, index); }

void Engine::SkipGlue() {
  while (pos_ < toks_.size() && IsGlue(toks_[pos_])) ++pos_;
}

bool Engine::PeekWord(std::string_view w) {
  size_t save = pos_;
  SkipGlue();
  bool hit = pos_ < toks_.size() && toks_[pos_].kind == LexKind::kWord && toks_[pos_].text == w;
  if (!hit) pos_ = save;
  return hit;
}

std::optional<Clause> Engine::ParseAll() {
  std::optional<Clause> root = ParseOr();
  if (!root) return std::nullopt;
  SkipGlue();
  if (pos_ != toks_.size()) {
    Fail(pos_);
    return std::nullopt;
  }
  return root;
}

std::optional<Clause> Engine::ParseOr() {
  std::optional<Clause> first = ParseAnd();
  if (!first) return std::nullopt;
  std::vector<Clause> children;
  children.push_back(std::move(*first));
  while (PeekWord("or")) {
    ++pos_;
    std::optional<Clause> next = ParseAnd();
    if (!next) return std::nullopt;
    children.push_back(std::move(*next));
  }
  if (children.size() == 1) return std::move(children.front());
  return Clause::Node(Predicate::kOr, std::move(children));
}

std::optional<Clause> Engine::ParseAnd() {
  std::optional<Clause> first = ParseUnary();
  if (!first) return std::nullopt;
  std::vector<Clause> children;
  children.push_back(std::move(*first));
  while (PeekWord("and")) {
    ++pos_;
    std::optional<Clause> next = ParseUnary();
    if (!next) return std::nullopt;
    children.push_back(std::move(*next));
  }
  if (children.size() == 1) return std::move(children.front());
  return Clause::Node(Predicate::kAnd, std::move(children));
}

std::optional<Clause> Engine::ParseUnary() {
  size_t glue_begin = pos_;
  SkipGlue();
  if (pos_ == toks_.size()) {
    if (collect_) {
      Expectation e;
      e.kind = ExpectKind::kClauseStart;
      e.glue_begin = glue_begin;
      expectations_.push_back(std::move(e));
    }
    Fail(pos_);
    return std::nullopt;
  }
  const LexToken &tok = toks_[pos_];
  if (tok.kind == LexKind::kWord && tok.text == "not") {
    ++pos_;
    std::optional<Clause> child = ParseUnary();
    if (!child) return std::nullopt;
    return Clause::Node(Predicate::kNot, {std::move(*child)});
  }
  if (tok.kind == LexKind::kLParen) {
    ++pos_;
    std::optional<Clause> inner = ParseOr();
    if (!inner) return std::nullopt;
    SkipGlue();
    if (pos_ == toks_.size()) {
      if (collect_) {
        Expectation e;
        e.kind = ExpectKind::kCloseParen;
        expectations_.push_back(std::move(e));
      }
      Fail(pos_);
      return std::nullopt;
    }
    if (toks_[pos_].kind != LexKind::kRParen) {
      Fail(pos_);
      return std::nullopt;
    }
    ++pos_;
    return inner;
  }
  return ParseClause();
}

Engine::Match Engine::MatchTemplate(const SurfaceTemplate &t, size_t start) {
  Match m;
  size_t i = start;
  const std::vector<Anchor> allowed = TaskAnchors(task_);
  for (size_t k = 0; k < t.items.size(); ++k) {
    const TemplateItem &item = t.items[k];
    while (true) {
      if (i == toks_.size()) {
        m.eof = true;
        m.item = k;
        m.end = i;
        return m;
      }
      const LexToken &tok = toks_[i];
      if (item.kind == ItemKind::kStop) {
        if (tok.kind == LexKind::kWord && tok.text == item.word) ++i;
        break;
      }
      bool hit = false;
      switch (item.kind) {
        case ItemKind::kKeyword:
          hit = tok.kind == LexKind::kWord && tok.text == item.word;
          break;
        case ItemKind::kPhrase:
          if (tok.kind == LexKind::kPhrase && !tok.text.empty()) {
            m.args.push_back(Phrase{tok.text});
            hit = true;
          }
          break;
        case ItemKind::kInt:
          if (tok.kind == LexKind::kInt && tok.value >= 0) {
            m.args.push_back(IntArg{tok.value});
            hit = true;
          }
          break;
        case ItemKind::kAnchor:
          if (tok.kind == LexKind::kWord) {
            std::string upper = tok.text;
            for (char &ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            if (auto a = AnchorFromName(upper)) {
              if (std::find(allowed.begin(), allowed.end(), *a) == allowed.end()) {
                if (!collect_) {
                  throw Error(ErrorCode::kUnknownAnchor,
                              "anchor " + std::string(AnchorName(*a)) + " is not available for " +
                                  std::string(TaskName(task_)));
                }
                break;
              }
              m.args.push_back(*a);
              m.anchors.push_back(*a);
              hit = true;
            }
          }
          break;
        case ItemKind::kStop:
          break;
      }
      if (hit) {
        ++i;
        break;
      }
      if (IsGlue(tok)) {
        ++i;
        continue;
      }
      m.item = k;
      m.end = i;
      return m;
    }
  }
  m.ok = true;
  m.end = i;
  return m;
}

std::optional<Clause> Engine::ParseClause() {
  const SurfaceTemplate *best = nullptr;
  Match best_match;
  for (const SurfaceTemplate &t : Templates()) {
    Match m = MatchTemplate(t, pos_);
    if (m.ok) {
      if (best == nullptr || m.end > best_match.end) {
        best = &t;
        best_match = std::move(m);
      }
      continue;
    }
    if (m.eof && collect_) {
      Expectation e{ExpectKind::kTemplate, &t, m.item, m.anchors};
      expectations_.push_back(std::move(e));
    }
    Fail(m.end);
  }
  if (best == nullptr) return std::nullopt;
  pos_ = best_match.end;
  Clause leaf = Clause::Leaf(best->predicate, std::move(best_match.args));
  if (!best->adds_contains) return leaf;
  Clause contains = Clause::Leaf(Predicate::kContains, {*leaf.keyword()});
  return Clause::Node(Predicate::kAnd, {std::move(contains), std::move(leaf)});
}

}  // namespace parser_internal

namespace {

using parser_internal::Engine;
using parser_internal::Lex;
using parser_internal::LexResult;

std::string Quote(const std::string &phrase) {
  if (phrase.find('\'') == std::string::npos) return "'" + phrase + "'";
  return "\"" + phrase + "\"";
}

bool IsWithinSugar(const Clause &c) {
  if (c.predicate != Predicate::kAnd || c.children.size() != 2) return false;
  const Clause &a = c.children[0];
  const Clause &b = c.children[1];
  if (a.predicate != Predicate::kContains || b.predicate != Predicate::kWithin) return false;
  return a.keyword() != nullptr && b.keyword() != nullptr && *a.keyword() == *b.keyword() &&
         a.args.size() == 1;
}

std::string RenderLeaf(const Clause &c, bool adds_contains) {
  const SurfaceTemplate &t = CanonicalTemplate(c.predicate, adds_contains);
  std::string out;
  size_t next_arg = 0;
  auto append = [&out](const std::string &w) {
    if (!out.empty()) out += ' ';
    out += w;
  };
  for (const TemplateItem &item : t.items) {
    switch (item.kind) {
      case ItemKind::kKeyword:
      case ItemKind::kStop:
        append(item.word);
        break;
      case ItemKind::kPhrase: {
        const std::string &p = std::get<Phrase>(c.args.at(next_arg++)).text;
        append(p.find(' ') == std::string::npos ? "the word" : "the phrase");
        append(Quote(p));
        break;
      }
      case ItemKind::kInt:
        append(std::to_string(std::get<IntArg>(c.args.at(next_arg++)).value));
        break;
      case ItemKind::kAnchor:
        append(std::string(AnchorName(std::get<Anchor>(c.args.at(next_arg++)))));
        break;
    }
  }
  return out;
}

std::string Wrap(const std::string &s, bool parens) { return parens ? "(" + s + ")" : s; }

bool IsCompound(const Clause &c, Predicate p) { return c.predicate == p && !IsWithinSugar(c); }

}  // namespace

LogicalForm Parse(std::string_view nl_text, TaskKind task, std::string_view label) {
  if (Trim(nl_text).empty()) throw Error(ErrorCode::kEmptyText, "explanation is empty");
  LexResult lexed = Lex(nl_text);
  if (lexed.open_quote) {
    throw ParseError(std::string(nl_text.substr(lexed.open_quote_begin)), lexed.open_quote_begin);
  }
  Engine engine(lexed.tokens, task, /*collect=*/false);
  std::optional<Clause> root = engine.ParseAll();
  if (!root) {
    size_t at = engine.fail_index();
    if (at >= lexed.tokens.size()) throw ParseError("<end of explanation>", nl_text.size());
    throw ParseError(lexed.tokens[at].raw, lexed.tokens[at].begin);
  }
  return LogicalForm{std::move(*root), std::string(label)};
}

std::string Render(const Clause &c) {
  if (IsWithinSugar(c)) return RenderLeaf(c.children[1], /*adds_contains=*/true);
  if (c.is_leaf()) return RenderLeaf(c, /*adds_contains=*/false);
  if (c.predicate == Predicate::kNot) {
    const Clause &child = c.children.at(0);
    return "not " + Wrap(Render(child), IsCompound(child, Predicate::kAnd) ||
                                            IsCompound(child, Predicate::kOr));
  }
  std::string joiner = c.predicate == Predicate::kAnd ? " and " : " or ";
  std::string out;
  for (const Clause &child : c.children) {
    bool parens = c.predicate == Predicate::kAnd
                      ? IsCompound(child, Predicate::kAnd) || IsCompound(child, Predicate::kOr)
                      : IsCompound(child, Predicate::kOr);
    if (!out.empty()) out += joiner;
    out += Wrap(Render(child), parens);
  }
  return out;
}

}  // namespace weaklab
