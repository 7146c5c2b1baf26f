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

#ifndef WEAKLAB_CORE_VALIDATE_H_
#define WEAKLAB_CORE_VALIDATE_H_

#include <string>
#include <vector>

#include "weaklab/core/types.h"

namespace weaklab {

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Checks an annotation against its document and the project schema.
// Violations are returned as data; this never throws.
ValidationResult ValidateAnnotation(const Annotation &a, const Document &doc,
                                    const LabelSchema &schema);

}  // namespace weaklab

#endif  // WEAKLAB_CORE_VALIDATE_H_
