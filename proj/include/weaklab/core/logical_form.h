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

// Logical forms: trees of predicate clauses produced by the explanation
// parser and scored by the soft matcher.

#ifndef WEAKLAB_CORE_LOGICAL_FORM_H_
#define WEAKLAB_CORE_LOGICAL_FORM_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace weaklab {

enum class PredicateCategory { kStringMatch, kDistanceCount, kDeterministic, kLogical };

enum class Predicate {
  // string_match
  kContains,
  kStartsWith,
  kEndsWith,
  // distance_count
  kWithin,
  kAtLeastNWordsBetween,
  kCountOccurrences,
  // deterministic
  kLeft,
  kRight,
  kBetween,
  kDirectlyPrecedes,
  // logical
  kAnd,
  kOr,
  kNot,
};

inline constexpr int kNumPredicates = 13;

enum class ArgKind { kPhrase, kAnchor, kInt };

// Static signature of a predicate. Logical AND/OR are variadic with at least
// `arity` children; every other predicate takes exactly `arity` arguments.
struct PredicateSignature {
  Predicate predicate;
  std::string_view name;
  PredicateCategory category;
  int arity;
  bool variadic;
  std::vector<ArgKind> arg_kinds;  // empty for logical predicates
};

const PredicateSignature &Signature(Predicate p);
std::string_view PredicateName(Predicate p);
std::optional<Predicate> PredicateFromName(std::string_view name);
std::string_view CategoryName(PredicateCategory c);
inline bool IsLogical(Predicate p) {
  return p == Predicate::kAnd || p == Predicate::kOr || p == Predicate::kNot;
}

enum class Anchor { kSubj, kObj, kTerm };

std::string_view AnchorName(Anchor a);
std::optional<Anchor> AnchorFromName(std::string_view name);

struct Phrase {
  std::string text;
  bool operator==(const Phrase &) const = default;
};

struct IntArg {
  int value = 0;
  bool operator==(const IntArg &) const = default;
};

using Arg = std::variant<Phrase, Anchor, IntArg>;

// A node in a logical form. Leaves carry `args`; logical nodes carry
// `children` and no args.
struct Clause {
  Predicate predicate = Predicate::kContains;
  std::vector<Arg> args;
  std::vector<Clause> children;

  bool operator==(const Clause &other) const {
    return predicate == other.predicate && args == other.args &&
           children == other.children;
  }

  bool is_leaf() const { return !IsLogical(predicate); }

  // First PHRASE argument of a leaf, if any.
  const Phrase *keyword() const;

  static Clause Leaf(Predicate p, std::vector<Arg> args);
  static Clause Node(Predicate p, std::vector<Clause> children);
};

struct LogicalForm {
  Clause root;
  std::string label;

  bool operator==(const LogicalForm &) const = default;
};

// Returns a list of violated structural invariants; empty when well formed.
std::vector<std::string> CheckLogicalForm(const LogicalForm &form);

// Leaves in depth-first, left-to-right order.
std::vector<const Clause *> Leaves(const Clause &root);

// Compact functional notation, e.g.
//   BETWEEN(PHRASE("caused by"), SUBJ, OBJ)
std::string ToString(const Clause &clause);

// Reads the compact notation back. Throws Error(kInvalidArgument).
Clause ClauseFromString(std::string_view text);

nlohmann::json ToJson(const Clause &clause);
Clause ClauseFromJson(const nlohmann::json &j);
nlohmann::json ToJson(const LogicalForm &form);
LogicalForm LogicalFormFromJson(const nlohmann::json &j);

}  // namespace weaklab

#endif  // WEAKLAB_CORE_LOGICAL_FORM_H_
