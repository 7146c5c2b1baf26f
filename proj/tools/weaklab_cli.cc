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


// Command-line front end. Every subcommand works on the same project
// registry as the HTTP service.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "weaklab/service/config.h"
#include "weaklab/service/engine.h"
#include "weaklab/service/http_server.h"
#include "weaklab/store/codec.h"

namespace {

using nlohmann::json;
using namespace weaklab;

struct Common {
  std::string config_path;
  std::string data_dir;
  std::string embeddings;
  std::string project;
};

std::string ReadAll(const std::string &path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteOut(const std::string &path, const std::string &data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
}

ServiceConfig Config(const Common &c) {
  ServiceConfig config = LoadConfig(c.config_path);
  if (!c.data_dir.empty()) config.data_dir = c.data_dir;
  if (!c.embeddings.empty()) config.embeddings_path = c.embeddings;
  return config;
}

std::shared_ptr<ProjectEngine> Require(ProjectRegistry &reg, const std::string &name) {
  auto p = reg.Find(name);
  if (!p) throw Error(ErrorCode::kNotFound, "unknown project '" + name + "'");
  return p;
}

void AddCommon(CLI::App *cmd, Common &c, bool project) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--data-dir", c.data_dir, "Project directory root");
  cmd->add_option("--embeddings", c.embeddings, "Word vectors in text format");
  if (project) cmd->add_option("-p,--project", c.project, "Project name")->required();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"weaklab: annotation with explanations and weak supervision"};
  app.require_subcommand(1);
  Common c;

  auto *serve = app.add_subcommand("serve", "Run the HTTP API");
  AddCommon(serve, c, false);
  std::string host;
  int port = 0;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");

  auto *import = app.add_subcommand("import", "Add documents to a project");
  AddCommon(import, c, true);
  std::string import_file, import_format = "plain", schema_file;
  import->add_option("file", import_file, "Corpus file, '-' for stdin")->required();
  import->add_option("-f,--format", import_format, "plain, csv or json");
  import->add_option("--schema", schema_file, "Label schema; creates the project if missing");

  auto *exp = app.add_subcommand("export", "Write annotations as JSON or CSV");
  AddCommon(exp, c, true);
  std::string export_format = "json", out_file;
  bool include_weak = false;
  exp->add_option("-f,--format", export_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  exp->add_flag("--include-weak", include_weak, "Include weak annotations");
  exp->add_option("-o,--output", out_file, "Output file (default stdout)");

  auto *train = app.add_subcommand("train", "Run one pipeline tick and publish a snapshot");
  AddCommon(train, c, true);

  auto *eval = app.add_subcommand("eval", "Score the current snapshot on gold data");
  AddCommon(eval, c, true);
  std::string gold_file;
  eval->add_option("gold", gold_file, "Gold records in the JSON export format")->required();

  auto *weak = app.add_subcommand("weaklabel", "Print the weak labels for the unlabeled pool");
  AddCommon(weak, c, true);
  std::string weak_out;
  weak->add_option("-o,--output", weak_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    ServiceConfig config = Config(c);
    if (config.data_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "data directory is empty");
    auto embeddings = LoadServiceEmbeddings(config);
    ProjectRegistry reg(config, embeddings);

    if (*serve) {
      if (!host.empty()) config.host = host;
      if (port != 0) config.port = port;
      std::cerr << "listening on " << config.host << ":" << config.port << "\n";
      return Serve(reg, config.host, config.port) ? 0 : 1;
    }
    if (*import) {
      auto format = ImportFormatFromName(import_format);
      if (!format) throw Error(ErrorCode::kInvalidArgument, "unknown format '" + import_format + "'");
      auto p = reg.Find(c.project);
      if (!p) {
        if (schema_file.empty()) throw Error(ErrorCode::kNotFound, "unknown project '" + c.project + "'; pass --schema");
        p = reg.Create(c.project, SchemaFromJson(json::parse(ReadAll(schema_file))));
      }
      ImportResult r = p->Import(ReadAll(import_file), *format);
      std::cout << json{{"added", r.documents_added},
                        {"duplicates", r.duplicates},
                        {"annotations_added", r.annotations_added}}
                       .dump()
                << "\n";
      return 0;
    }
    if (*exp) {
      WriteOut(out_file, Require(reg, c.project)->Export(export_format == "csv", include_weak));
      return 0;
    }
    if (*train) {
      PipelineReport r = Require(reg, c.project)->Tick();
      std::cout << r.ToJson().dump(2) << "\n";
      return r.failures.empty() ? 0 : 3;
    }
    if (*eval) {
      auto p = Require(reg, c.project);
      auto snap = p->snapshot();
      if (!snap) throw Error(ErrorCode::kNotFound, "project has no snapshot; run train first");
      std::vector<ImportRecord> gold = ParseCorpus(ReadAll(gold_file), ImportFormat::kJson);
      std::cout << EvaluateSnapshot(*snap, p->schema(), gold, config, *embeddings).ToJson().dump(2) << "\n";
      return 0;
    }
    if (*weak) {
      auto p = Require(reg, c.project);
      ProjectState state = p->StateCopy();
      PipelineReport report;
      std::vector<Annotation> labels;
      TrainSnapshot(state, config, *embeddings, state.snapshot_version + 1, &report, &labels);
      std::string out;
      for (const Annotation &a : labels) {
        json j = AnnotationToExportJson(a, state.documents.at(a.doc_id));
        j["doc_id"] = a.doc_id;
        out += j.dump() + "\n";
      }
      WriteOut(weak_out, out);
      for (const std::string &f : report.failures) std::cerr << "warning: " << f << "\n";
      return 0;
    }
  } catch (const RecordError &e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
