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

#include "weaklab/core/tokenizer.h"

#include <cctype>

#include "weaklab/core/error.h"

namespace weaklab {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool IsPunct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

void Emit(std::string_view text, size_t start, size_t end, std::vector<Token> *out) {
  Token t;
  t.surface = std::string(text.substr(start, end - start));
  t.lower = AsciiLower(t.surface);
  t.char_start = start;
  t.char_end = end;
  out->push_back(std::move(t));
}

}  // namespace

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

TokenizedText Tokenize(std::string_view text) {
  if (Trim(text).empty()) throw Error(ErrorCode::kEmptyText, "text is empty");
  TokenizedText result;
  result.text = std::string(text);
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (IsSpace(text[i])) {
      ++i;
      continue;
    }
    size_t chunk_end = i;
    while (chunk_end < n && !IsSpace(text[chunk_end])) ++chunk_end;

    // Leading punctuation.
    size_t b = i;
    while (b < chunk_end && IsPunct(text[b])) {
      Emit(text, b, b + 1, &result.tokens);
      ++b;
    }
    // Trailing punctuation, emitted after the word.
    size_t e = chunk_end;
    while (e > b && IsPunct(text[e - 1])) --e;
    if (b < e) Emit(text, b, e, &result.tokens);
    for (size_t k = e; k < chunk_end; ++k) Emit(text, k, k + 1, &result.tokens);
    i = chunk_end;
  }
  return result;
}

std::vector<std::string> TokenizeLower(std::string_view text) { return Tokenize(text).Lowered(); }

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool boundary = (c == '.' || c == '!' || c == '?') && i + 1 < text.size() && IsSpace(text[i + 1]);
    if (!boundary) continue;
    std::string piece = Trim(text.substr(start, i + 1 - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = i + 1;
  }
  std::string tail = Trim(text.substr(start));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

std::vector<std::string> TokenizedText::Lowered() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(t.lower);
  return out;
}

std::vector<std::string> TokenizedText::Surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace weaklab
