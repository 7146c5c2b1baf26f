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

#ifndef WEAKLAB_CORE_TOKENIZER_H_
#define WEAKLAB_CORE_TOKENIZER_H_

#include <string>
#include <string_view>
#include <vector>

#include "weaklab/core/types.h"

namespace weaklab {

// Splits on ASCII whitespace, then peels leading and trailing ASCII
// punctuation off each chunk into single-character tokens. Internal
// punctuation ("don't", "U.S") stays inside the word. Bytes >= 0x80 are word
// characters, so UTF-8 sequences are never split.
//
// Throws Error(kEmptyText) when the text is empty after trimming.
TokenizedText Tokenize(std::string_view text);

// Lowercased token strings; convenience for matching code.
std::vector<std::string> TokenizeLower(std::string_view text);

// Splits multi-sentence input on '.', '!' or '?' followed by whitespace.
// Returned sentences are trimmed; empty pieces are dropped.
std::vector<std::string> SplitSentences(std::string_view text);

std::string AsciiLower(std::string_view s);
std::string Trim(std::string_view s);

}  // namespace weaklab

#endif  // WEAKLAB_CORE_TOKENIZER_H_
