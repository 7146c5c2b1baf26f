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


#ifndef WEAKLAB_MATCHER_WEAK_LABELER_H_
#define WEAKLAB_MATCHER_WEAK_LABELER_H_

#include <ostream>
#include <string>
#include <vector>

#include "weaklab/core/embeddings.h"
#include "weaklab/core/types.h"
#include "weaklab/matcher/soft_matcher.h"

namespace weaklab {

struct RuleForm {
  std::string id;
  LogicalForm form;
};

// One candidate labeling instance: a sentence with the anchors it offers.
// For relation extraction SUBJ/OBJ, otherwise TERM.
struct MatchInstance {
  DocId doc_id = 0;
  MatchContext ctx;
};

struct AuditRecord {
  DocId doc_id = 0;
  std::string form_id;
  double score = 0.0;
  std::string label;
  std::vector<double> clause_scores;
};

// Scores every (form, instance) pair and emits one weak annotation per
// instance whose best score reaches thresholds.accept. When the best score
// is shared by forms with different labels the instance is dropped. Forms
// needing an anchor the instance lacks are skipped. Output is sorted by
// document id, then span, and does not depend on input order of `pool`.
std::vector<Annotation> WeakLabelCorpus(const std::vector<RuleForm> &forms,
                                        const std::vector<MatchInstance> &pool, TaskKind task,
                                        const Thresholds &thresholds, const Embeddings &embeddings,
                                        std::vector<AuditRecord> *audit = nullptr);

// JSON lines: {"doc_id", "form_id", "score", "label", "clause_scores"}.
void WriteAuditLog(std::ostream &out, const std::vector<AuditRecord> &records);

}  // namespace weaklab

#endif  // WEAKLAB_MATCHER_WEAK_LABELER_H_
