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

#include "weaklab/core/logical_form.h"

#include <array>
#include <cctype>

#include "weaklab/core/error.h"

namespace weaklab {
namespace {

using K = ArgKind;
using C = PredicateCategory;

const std::array<PredicateSignature, kNumPredicates> &Signatures() {
  static const std::array<PredicateSignature, kNumPredicates> table = {{
      {Predicate::kContains, "CONTAINS", C::kStringMatch, 1, false, {K::kPhrase}},
      {Predicate::kStartsWith, "STARTS_WITH", C::kStringMatch, 1, false, {K::kPhrase}},
      {Predicate::kEndsWith, "ENDS_WITH", C::kStringMatch, 1, false, {K::kPhrase}},
      {Predicate::kWithin, "WITHIN", C::kDistanceCount, 3, false,
       {K::kPhrase, K::kInt, K::kAnchor}},
      {Predicate::kAtLeastNWordsBetween, "AT_LEAST_N_WORDS_BETWEEN", C::kDistanceCount, 3,
       false, {K::kInt, K::kAnchor, K::kAnchor}},
      {Predicate::kCountOccurrences, "COUNT_OCCURRENCES", C::kDistanceCount, 2, false,
       {K::kPhrase, K::kInt}},
      {Predicate::kLeft, "LEFT", C::kDeterministic, 2, false, {K::kPhrase, K::kAnchor}},
      {Predicate::kRight, "RIGHT", C::kDeterministic, 2, false, {K::kPhrase, K::kAnchor}},
      {Predicate::kBetween, "BETWEEN", C::kDeterministic, 3, false,
       {K::kPhrase, K::kAnchor, K::kAnchor}},
      {Predicate::kDirectlyPrecedes, "DIRECTLY_PRECEDES", C::kDeterministic, 2, false,
       {K::kPhrase, K::kAnchor}},
      {Predicate::kAnd, "AND", C::kLogical, 2, true, {}},
      {Predicate::kOr, "OR", C::kLogical, 2, true, {}},
      {Predicate::kNot, "NOT", C::kLogical, 1, false, {}},
  }};
  return table;
}

std::string QuotePhrase(const std::string &text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void CheckClause(const Clause &c, std::vector<std::string> *problems) {
  const PredicateSignature &sig = Signature(c.predicate);
  std::string name(sig.name);
  if (IsLogical(c.predicate)) {
    if (!c.args.empty()) problems->push_back(name + " must not carry arguments");
    if (c.predicate == Predicate::kNot && c.children.size() != 1) {
      problems->push_back("NOT must have exactly one child");
    }
    if (c.predicate != Predicate::kNot && c.children.size() < 2) {
      problems->push_back(name + " must have at least two children");
    }
    for (const Clause &child : c.children) CheckClause(child, problems);
    return;
  }
  if (!c.children.empty()) problems->push_back(name + " leaf must not have children");
  if (c.args.size() != sig.arg_kinds.size()) {
    problems->push_back(name + " expects " + std::to_string(sig.arity) + " arguments");
    return;
  }
  for (size_t i = 0; i < c.args.size(); ++i) {
    const Arg &arg = c.args[i];
    if (static_cast<size_t>(arg.index()) != static_cast<size_t>(sig.arg_kinds[i])) {
      problems->push_back(name + " argument " + std::to_string(i) + " has the wrong kind");
      continue;
    }
    if (const auto *p = std::get_if<Phrase>(&arg); p != nullptr && p->text.empty()) {
      problems->push_back(name + " has an empty phrase");
    }
    if (const auto *n = std::get_if<IntArg>(&arg); n != nullptr && n->value < 0) {
      problems->push_back(name + " has a negative integer");
    }
  }
}

// Recursive-descent reader for the compact notation.
class CompactReader {
 public:
  explicit CompactReader(std::string_view text) : text_(text) {}

  Clause ReadAll() {
    Clause c = ReadClause();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing input");
    return c;
  }

 private:
  [[noreturn]] void Fail(const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad logical form at offset " + std::to_string(pos_) + ": " + what);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c) {
    if (!Accept(c)) Fail(std::string("expected '") + c + "'");
  }

  std::string ReadName() {
    SkipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isupper(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string ReadQuoted() {
    Expect('"');
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) Fail("unterminated phrase");
    ++pos_;
    return out;
  }

  int ReadInt() {
    SkipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) Fail("expected an integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  Arg ReadArg() {
    std::string name = ReadName();
    if (name == "PHRASE") {
      Expect('(');
      std::string text = ReadQuoted();
      Expect(')');
      return Phrase{text};
    }
    if (name == "INT") {
      Expect('(');
      int v = ReadInt();
      Expect(')');
      return IntArg{v};
    }
    if (auto anchor = AnchorFromName(name)) return *anchor;
    Fail("unknown argument " + name);
  }

  Clause ReadClause() {
    std::string name = ReadName();
    auto pred = PredicateFromName(name);
    if (!pred) Fail("unknown predicate " + name);
    Clause c;
    c.predicate = *pred;
    Expect('(');
    if (!Accept(')')) {
      do {
        if (IsLogical(*pred)) {
          c.children.push_back(ReadClause());
        } else {
          c.args.push_back(ReadArg());
        }
      } while (Accept(','));
      Expect(')');
    }
    return c;
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

const PredicateSignature &Signature(Predicate p) {
  return Signatures()[static_cast<size_t>(p)];
}

std::string_view PredicateName(Predicate p) { return Signature(p).name; }

std::optional<Predicate> PredicateFromName(std::string_view name) {
  for (const PredicateSignature &sig : Signatures()) {
    if (sig.name == name) return sig.predicate;
  }
  return std::nullopt;
}

std::string_view CategoryName(PredicateCategory c) {
  switch (c) {
    case C::kStringMatch: return "string_match";
    case C::kDistanceCount: return "distance_count";
    case C::kDeterministic: return "deterministic";
    case C::kLogical: return "logical";
  }
  return "";
}

std::string_view AnchorName(Anchor a) {
  switch (a) {
    case Anchor::kSubj: return "SUBJ";
    case Anchor::kObj: return "OBJ";
    case Anchor::kTerm: return "TERM";
  }
  return "";
}

std::optional<Anchor> AnchorFromName(std::string_view name) {
  if (name == "SUBJ") return Anchor::kSubj;
  if (name == "OBJ") return Anchor::kObj;
  if (name == "TERM") return Anchor::kTerm;
  return std::nullopt;
}

const Phrase *Clause::keyword() const {
  for (const Arg &a : args) {
    if (const auto *p = std::get_if<Phrase>(&a)) return p;
  }
  return nullptr;
}

Clause Clause::Leaf(Predicate p, std::vector<Arg> args) {
  Clause c;
  c.predicate = p;
  c.args = std::move(args);
  return c;
}

Clause Clause::Node(Predicate p, std::vector<Clause> children) {
  Clause c;
  c.predicate = p;
  c.children = std::move(children);
  return c;
}

std::vector<std::string> CheckLogicalForm(const LogicalForm &form) {
  std::vector<std::string> problems;
  CheckClause(form.root, &problems);
  if (Leaves(form.root).empty()) problems.push_back("logical form has no leaf clause");
  return problems;
}

std::vector<const Clause *> Leaves(const Clause &root) {
  std::vector<const Clause *> out;
  std::vector<const Clause *> stack = {&root};
  while (!stack.empty()) {
    const Clause *c = stack.back();
    stack.pop_back();
    if (c->is_leaf()) {
      out.push_back(c);
      continue;
    }
    for (auto it = c->children.rbegin(); it != c->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

std::string ToString(const Clause &clause) {
  std::string out(PredicateName(clause.predicate));
  out += '(';
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const Arg &arg : clause.args) {
    sep();
    if (const auto *p = std::get_if<Phrase>(&arg)) {
      out += "PHRASE(" + QuotePhrase(p->text) + ")";
    } else if (const auto *a = std::get_if<Anchor>(&arg)) {
      out += AnchorName(*a);
    } else {
      out += "INT(" + std::to_string(std::get<IntArg>(arg).value) + ")";
    }
  }
  for (const Clause &child : clause.children) {
    sep();
    out += ToString(child);
  }
  out += ')';
  return out;
}

Clause ClauseFromString(std::string_view text) { return CompactReader(text).ReadAll(); }

nlohmann::json ToJson(const Clause &clause) {
  nlohmann::json j;
  j["op"] = std::string(PredicateName(clause.predicate));
  if (IsLogical(clause.predicate)) {
    j["children"] = nlohmann::json::array();
    for (const Clause &c : clause.children) j["children"].push_back(ToJson(c));
    return j;
  }
  j["args"] = nlohmann::json::array();
  for (const Arg &arg : clause.args) {
    if (const auto *p = std::get_if<Phrase>(&arg)) {
      j["args"].push_back({{"phrase", p->text}});
    } else if (const auto *a = std::get_if<Anchor>(&arg)) {
      j["args"].push_back({{"anchor", std::string(AnchorName(*a))}});
    } else {
      j["args"].push_back({{"int", std::get<IntArg>(arg).value}});
    }
  }
  return j;
}

Clause ClauseFromJson(const nlohmann::json &j) {
  auto pred = PredicateFromName(j.at("op").get<std::string>());
  if (!pred) throw Error(ErrorCode::kInvalidArgument, "unknown predicate in JSON");
  Clause c;
  c.predicate = *pred;
  if (IsLogical(*pred)) {
    for (const auto &child : j.at("children")) c.children.push_back(ClauseFromJson(child));
    return c;
  }
  for (const auto &a : j.at("args")) {
    if (a.contains("phrase")) {
      c.args.push_back(Phrase{a["phrase"].get<std::string>()});
    } else if (a.contains("anchor")) {
      auto anchor = AnchorFromName(a["anchor"].get<std::string>());
      if (!anchor) throw Error(ErrorCode::kInvalidArgument, "unknown anchor in JSON");
      c.args.push_back(*anchor);
    } else {
      c.args.push_back(IntArg{a.at("int").get<int>()});
    }
  }
  return c;
}

nlohmann::json ToJson(const LogicalForm &form) {
  return {{"label", form.label}, {"root", ToJson(form.root)}};
}

LogicalForm LogicalFormFromJson(const nlohmann::json &j) {
  return LogicalForm{ClauseFromJson(j.at("root")), j.at("label").get<std::string>()};
}

}  // namespace weaklab
