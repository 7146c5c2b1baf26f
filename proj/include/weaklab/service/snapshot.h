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


// Immutable model snapshots. Training builds a new snapshot off to the side
// and publishes it with one pointer swap; readers keep whatever snapshot
// they loaded for as long as they hold it.

#ifndef WEAKLAB_SERVICE_SNAPSHOT_H_
#define WEAKLAB_SERVICE_SNAPSHOT_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weaklab/models/recommender.h"
#include "weaklab/trigger/trigger_model.h"

namespace weaklab {

struct ModelSnapshot {
  uint64_t version = 0;
  TaskKind task = TaskKind::kSequenceLabeling;
  Recommender recommender;
  // Trigger matching, sequence labeling only.
  std::optional<TriggerModel> trigger_model;
  std::vector<TriggerEntry> trigger_table;
  std::optional<SequenceLabeler> trigger_labeler;
  // Fingerprint of the gold annotations the snapshot was trained on.
  uint64_t gold_fingerprint = 0;
  size_t gold_count = 0;
  size_t weak_rule_labels = 0;
  size_t weak_trigger_labels = 0;

  bool trained() const { return recommender.trained(); }

  // Format "weaklab-snapshot", version 1.
  nlohmann::json ToJson() const;
  static ModelSnapshot FromJson(const nlohmann::json &j);
};

class SnapshotHolder {
 public:
  std::shared_ptr<const ModelSnapshot> Get() const {
    std::lock_guard<std::mutex> lock(mu_);
    return current_;
  }
  void Publish(std::shared_ptr<const ModelSnapshot> snapshot) {
    std::lock_guard<std::mutex> lock(mu_);
    current_ = std::move(snapshot);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const ModelSnapshot> current_;
};

}  // namespace weaklab

#endif  // WEAKLAB_SERVICE_SNAPSHOT_H_
