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

// Lexer and recursive-descent engine shared by Parse() and Suggest().

#ifndef WEAKLAB_SRC_PARSER_INTERNAL_H_
#define WEAKLAB_SRC_PARSER_INTERNAL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/logical_form.h"
#include "weaklab/core/types.h"
#include "weaklab/parser/grammar.h"

namespace weaklab::parser_internal {

enum class LexKind { kWord, kPhrase, kInt, kLParen, kRParen, kPunct };

struct LexToken {
  LexKind kind;
  std::string text;  // lowercased for words, verbatim for phrases
  std::string raw;   // source slice
  int value = 0;     // kInt
  size_t begin = 0;
  size_t end = 0;
};

struct LexResult {
  std::vector<LexToken> tokens;
  // Set when the input ends inside a quoted phrase.
  bool open_quote = false;
  std::string close_quote;
  size_t open_quote_begin = 0;
};

LexResult Lex(std::string_view text);

bool IsGlue(const LexToken &t);

enum class ExpectKind { kClauseStart, kTemplate, kCloseParen };

// What the grammar would accept where the input ran out.
struct Expectation {
  ExpectKind kind = ExpectKind::kClauseStart;
  const SurfaceTemplate *tmpl = nullptr;
  size_t item = 0;
  std::vector<Anchor> used_anchors;
  size_t glue_begin = 0;  // kClauseStart: first token after the last structure
};

class Engine {
 public:
  // In collect mode, running out of input records expectations instead of
  // only failing, and disallowed anchors count as mismatches rather than
  // throwing.
  Engine(const std::vector<LexToken> &tokens, TaskKind task, bool collect)
      : toks_(tokens), task_(task), collect_(collect) {}

  std::optional<Clause> ParseAll();

  // Index of the furthest token no rule could consume; tokens.size() means
  // the input ended early.
  size_t fail_index() const { return fail_index_; }
  const std::vector<Expectation> &expectations() const { return expectations_; }

 private:
  struct Match {
    bool ok = false;
    bool eof = false;
    size_t end = 0;
    size_t item = 0;  // item index where eof or mismatch happened
    std::vector<Arg> args;
    std::vector<Anchor> anchors;
  };

  std::optional<Clause> ParseOr();
  std::optional<Clause> ParseAnd();
  std::optional<Clause> ParseUnary();
  std::optional<Clause> ParseClause();
  Match MatchTemplate(const SurfaceTemplate &t, size_t start);
  void SkipGlue();
  bool PeekWord(std::string_view w);
  void Fail(size_t index);

  const std::vector<LexToken> &toks_;
  TaskKind task_;
  bool collect_;
  size_t pos_ = 0;
  size_t fail_index_ = 0;
  std::vector<Expectation> expectations_;
};

}  // namespace weaklab::parser_internal

#endif  // WEAKLAB_SRC_PARSER_INTERNAL_H_
