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


#include "weaklab/matcher/weak_labeler.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace weaklab {
namespace {

bool HasAnchors(const MatchContext &ctx, const std::vector<Anchor> &anchors) {
  return std::all_of(anchors.begin(), anchors.end(),
                     [&](Anchor a) { return ctx.Find(a) != nullptr; });
}

Annotation MakeWeak(const MatchInstance &inst, TaskKind task, const RuleForm &rule, double score) {
  Annotation a;
  a.doc_id = inst.doc_id;
  a.label = rule.form.label;
  a.source = Source::kWeak;
  a.provenance = Provenance{"rule", rule.id, score};
  auto with_doc = [&](Span s) {
    s.doc_id = inst.doc_id;
    return s;
  };
  switch (task) {
    case TaskKind::kRelationExtraction:
      a.kind = AnnotationKind::kRelation;
      a.span = with_doc(*inst.ctx.subj);
      a.span2 = with_doc(*inst.ctx.obj);
      break;
    case TaskKind::kSentimentAnalysis:
      a.kind = AnnotationKind::kClass;
      if (inst.ctx.term) a.span = with_doc(*inst.ctx.term);
      break;
    case TaskKind::kSequenceLabeling:
      a.kind = AnnotationKind::kSpan;
      a.span = with_doc(*inst.ctx.term);
      break;
  }
  return a;
}

std::vector<Anchor> InstanceAnchors(TaskKind task) {
  switch (task) {
    case TaskKind::kRelationExtraction: return {Anchor::kSubj, Anchor::kObj};
    case TaskKind::kSequenceLabeling: return {Anchor::kTerm};
    case TaskKind::kSentimentAnalysis: return {};
  }
  return {};
}

}  // namespace

std::vector<Annotation> WeakLabelCorpus(const std::vector<RuleForm> &forms,
                                        const std::vector<MatchInstance> &pool, TaskKind task,
                                        const Thresholds &thresholds, const Embeddings &embeddings,
                                        std::vector<AuditRecord> *audit) {
  thresholds.Check();
  std::vector<std::vector<Anchor>> needs;
  for (const RuleForm &f : forms) needs.push_back(RequiredAnchors(f.form.root));
  const std::vector<Anchor> instance_needs = InstanceAnchors(task);

  std::vector<Annotation> out;
  std::vector<AuditRecord> records;
  for (const MatchInstance &inst : pool) {
    if (inst.ctx.sentence == nullptr || !HasAnchors(inst.ctx, instance_needs)) continue;
    int best = -1;
    MatchResult best_result;
    bool tied = false;
    for (size_t i = 0; i < forms.size(); ++i) {
      if (!HasAnchors(inst.ctx, needs[i])) continue;
      MatchResult r = MatchSentence(forms[i].form, inst.ctx, thresholds, embeddings);
      if (best < 0 || r.score > best_result.score) {
        best = static_cast<int>(i);
        best_result = std::move(r);
        tied = false;
      } else if (r.score == best_result.score && r.label != best_result.label) {
        tied = true;
      }
    }
    if (best < 0 || tied || best_result.score < thresholds.accept || best_result.score <= 0.0) {
      continue;
    }
    out.push_back(MakeWeak(inst, task, forms[best], best_result.score));
    records.push_back({inst.doc_id, forms[best].id, best_result.score, best_result.label,
                       best_result.clause_scores});
  }

  std::vector<size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    const Annotation &a = out[x];
    const Annotation &b = out[y];
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    if (a.span != b.span) return a.span < b.span;
    if (a.span2 != b.span2) return a.span2 < b.span2;
    return a.label < b.label;
  });
  std::vector<Annotation> sorted;
  for (size_t i : order) {
    sorted.push_back(std::move(out[i]));
    if (audit != nullptr) audit->push_back(std::move(records[i]));
  }
  return sorted;
}

void WriteAuditLog(std::ostream &out, const std::vector<AuditRecord> &records) {
  for (const AuditRecord &r : records) {
    nlohmann::json j = {{"doc_id", r.doc_id},
                        {"form_id", r.form_id},
                        {"score", r.score},
                        {"label", r.label},
                        {"clause_scores", r.clause_scores}};
    out << j.dump() << '\n';
  }
}

}  // namespace weaklab
