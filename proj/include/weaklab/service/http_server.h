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


// JSON-over-HTTP binding of the project engine.
//
//   GET    /health
//   GET    /grammar
//   GET    /projects
//   POST   /projects                              {name, schema, request_id?}
//   GET    /projects/:p
//   POST   /projects/:p/documents                 {format, payload}
//   GET    /projects/:p/documents/:doc
//   GET    /projects/:p/next_batch?k=
//   POST   /projects/:p/annotations               see ProjectEngine::Submit
//   DELETE /projects/:p/annotations/:id
//   GET    /projects/:p/recommendations?doc_id=&subj=s-e&obj=s-e
//   GET    /projects/:p/suggest?text=&cursor=
//   GET    /projects/:p/export?format=json|csv&include_weak=1
//   GET    /projects/:p/training_status
//   POST   /projects/:p/tick
//
// Validation failures answer 400 with {"error", "violations"}, unknown
// projects and documents 404, duplicate ids 409.

#ifndef WEAKLAB_SERVICE_HTTP_SERVER_H_
#define WEAKLAB_SERVICE_HTTP_SERVER_H_

#include "httplib.h"
#include "weaklab/service/engine.h"

namespace weaklab {

void MountApi(httplib::Server &server, ProjectRegistry &registry);

// Serves until the process is stopped. Returns false if binding fails.
bool Serve(ProjectRegistry &registry, const std::string &host, int port);

}  // namespace weaklab

#endif  // WEAKLAB_SERVICE_HTTP_SERVER_H_
