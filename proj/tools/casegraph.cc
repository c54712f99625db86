// Copyright 2026 The CaseGraph Authors.
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

// Command-line front end: ingest, search, reason, export-graph, serve.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 temporal inconsistency.
// Data goes to stdout, diagnostics to stderr.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "casegraph/annotation_io.h"
#include "casegraph/error.h"
#include "casegraph/ingest.h"
#include "casegraph/json_codec.h"
#include "casegraph/service.h"
#include "casegraph/storage.h"
#include "httplib.h"

#ifndef CASEGRAPH_DEFAULT_GAZETTEER
#define CASEGRAPH_DEFAULT_GAZETTEER "data/gazetteer.tsv"
#endif
#ifndef CASEGRAPH_DEFAULT_FIXTURES
#define CASEGRAPH_DEFAULT_FIXTURES "fixtures/articles"
#endif

namespace cg = casegraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconsistent = 2;

struct Common {
  std::string store;
  std::string gazetteer = CASEGRAPH_DEFAULT_GAZETTEER;
  bool json = false;
};

std::string ReadInput(const std::string &path) { return cg::ReadFile(path); }

int RunIngest(const Common &common, const std::string &text_file,
              const std::string &xml_file, const std::string &ann_file,
              const std::string &txt_file, const std::string &fetch_id,
              const std::string &fixtures, std::string id, const std::string &title,
              bool replace, bool force) {
  cg::Store store(common.store);
  cg::SearchEngine engine;
  cg::Pipeline pipeline(cg::Gazetteer::Load(common.gazetteer), &engine, &store);
  cg::IngestOptions options;
  options.replace = replace;
  options.force = force;
  // The CLI keeps no live index; search rebuilds or loads a snapshot.
  options.index = false;
  if (id.empty()) id = pipeline.NextDocId();

  cg::IngestReport report;
  if (!text_file.empty()) {
    report = pipeline.IngestText(id, title, ReadInput(text_file), options);
  } else if (!xml_file.empty()) {
    report = pipeline.IngestXml(id, ReadInput(xml_file), options);
  } else if (!ann_file.empty()) {
    report = pipeline.IngestStandoff(id, title, ReadInput(txt_file), ReadInput(ann_file),
                                     options);
  } else {
    cg::FetchConfig fetch = cg::FetchConfig::FromEnvironment(fixtures);
    options.source_meta = {{"provenance", "pubmed"}, {"externalId", fetch_id}};
    report = pipeline.IngestXml(id, cg::FetchArticle(fetch_id, fetch), options);
  }
  for (const std::string &w : report.warnings) std::cerr << "warning: " << w << "\n";
  if (common.json) {
    std::cout << cg::ToJson(report).dump(2) << "\n";
  } else {
    std::cout << "ingested " << report.document.doc_id << " version " << report.version
              << ": " << report.entities.size() << " entities, "
              << report.relations.size() << " relations, " << report.graph.nodes.size()
              << " nodes, " << report.graph.edges.size() << " edges\n";
    for (const cg::Entity &e : report.entities) {
      std::cout << "  " << e.id << "\t" << e.type.Name() << "\t" << e.text << "\n";
    }
    for (const cg::RelationAssertion &r : report.relations) {
      std::cout << "  " << r.id << "\t" << cg::RelationTypeName(r.type) << " " << r.source
                << " " << r.target << "\n";
    }
  }
  return kExitOk;
}

int RunSearch(const Common &common, const std::string &query, const std::string &mode_name,
              std::size_t k) {
  cg::Store store(common.store);
  cg::SearchEngine engine;
  cg::Pipeline pipeline(cg::Gazetteer::Load(common.gazetteer), &engine, &store);
  bool from_snapshot = pipeline.WarmIndex();
  std::cerr << (from_snapshot ? "index loaded from snapshot\n" : "index rebuilt from store\n");
  cg::SearchMode mode = mode_name == "keyword" ? cg::SearchMode::kKeyword
                        : mode_name == "graph" ? cg::SearchMode::kGraph
                                               : cg::SearchMode::kHybrid;
  std::vector<cg::SearchResult> results = engine.Search(query, mode, pipeline.gazetteer(), k);
  if (common.json) {
    std::cout << cg::ToJson(results).dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "rank\tprovenance\tscore\tdocId\tmatched\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const cg::SearchResult &r = results[i];
    std::ostringstream score;
    score << std::fixed << std::setprecision(4) << r.score;
    std::string matched;
    for (const cg::GraphEdge &e : r.matched_edges) {
      if (!matched.empty()) matched += ", ";
      matched += std::string(cg::RelationTypeName(e.label)) + "(" + e.source + "," + e.target + ")";
    }
    std::cout << i + 1 << "\t" << cg::ProvenanceName(r.provenance) << "\t" << score.str()
              << "\t" << r.doc_id << "\t" << matched << "\n";
  }
  return kExitOk;
}

int RunReason(const std::string &file, bool json, bool score, bool timeline,
              bool count_missing_third) {
  std::vector<cg::RelationAssertion> relations = cg::ParseRelationList(ReadInput(file));
  cg::Json report = cg::ReasonReport(relations, {count_missing_third});
  bool consistent = report["consistency"]["status"] == "consistent";
  if (json) {
    std::cout << report.dump(2) << "\n";
    return consistent ? kExitOk : kExitInconsistent;
  }
  std::cout << (consistent ? "consistent" : "inconsistent") << "\n";
  for (const cg::Json &t : report["closure"]) {
    std::cout << t[0].get<std::string>() << " " << t[1].get<std::string>() << " "
              << t[2].get<std::string>() << "\n";
  }
  for (const cg::Json &chain : report["consistency"]["witnesses"]) {
    std::cout << "witness:";
    for (const cg::Json &t : chain) {
      std::cout << " " << t[0].get<std::string>() << "(" << t[1].get<std::string>() << ","
                << t[2].get<std::string>() << ")";
    }
    std::cout << "\n";
  }
  if (score) {
    const cg::Json &s = report["satisfactionScore"];
    std::cout << "score " << s["score"].get<double>() << " (" << s["satisfied"] << "/"
              << s["applicable"] << ")\n";
  }
  if (timeline && consistent) {
    std::size_t layer = 0;
    for (const cg::Json &components : report["timeline"]) {
      std::cout << "layer " << layer++ << ":";
      for (const cg::Json &component : components) {
        std::string joined;
        for (const cg::Json &node : component) {
          joined += (joined.empty() ? "" : ",") + node.get<std::string>();
        }
        std::cout << " {" << joined << "}";
      }
      std::cout << "\n";
    }
  }
  return consistent ? kExitOk : kExitInconsistent;
}

int RunExport(const Common &common, const std::string &id, const std::string &format) {
  cg::Store store(common.store);
  cg::CaseGraph graph = store.Get(id).graph;
  std::cout << (format == "dot" ? cg::SerializeGraphDot(graph)
                                : cg::ToJson(graph).dump(2) + "\n");
  return kExitOk;
}

int RunServe(const Common &common, const std::string &host, int port,
             const std::string &fixtures, const std::string &static_dir) {
  cg::Store store(common.store);
  cg::SearchEngine engine;
  cg::Pipeline pipeline(cg::Gazetteer::Load(common.gazetteer), &engine, &store);
  pipeline.WarmIndex();
  cg::ServiceOptions options;
  options.fetch = cg::FetchConfig::FromEnvironment(fixtures);
  cg::Service service(&pipeline, options);
  httplib::Server server;
  service.Mount(&server, static_dir);
  std::cerr << "serving " << store.size() << " documents on http://" << host << ":" << port
            << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Clinical case-report extraction, temporal reasoning and search"};
  app.require_subcommand(1);
  Common common;

  auto add_store = [&](CLI::App *cmd) {
    cmd->add_option("--store", common.store, "Store directory")->required();
    cmd->add_option("--gazetteer", common.gazetteer, "Gazetteer TSV")
        ->check(CLI::ExistingFile);
  };

  std::string text_file, xml_file, ann_file, txt_file, fetch_id, id, title;
  std::string fixtures = CASEGRAPH_DEFAULT_FIXTURES;
  bool replace = false, force = false;
  CLI::App *ingest = app.add_subcommand("ingest", "Ingest a document into the store");
  add_store(ingest);
  auto *o_text = ingest->add_option("--text", text_file, "Plain-text document");
  auto *o_xml = ingest->add_option("--xml", xml_file, "Article XML");
  auto *o_ann = ingest->add_option("--ann", ann_file, "Standoff annotations");
  auto *o_txt = ingest->add_option("--txt", txt_file, "Text the annotations refer to");
  auto *o_fetch = ingest->add_option("--fetch", fetch_id, "Article id to fetch");
  o_ann->needs(o_txt);
  o_txt->needs(o_ann);
  o_text->excludes(o_xml)->excludes(o_ann)->excludes(o_fetch);
  o_xml->excludes(o_ann)->excludes(o_fetch);
  o_ann->excludes(o_fetch);
  ingest->add_option("--fixtures", fixtures, "Fixture directory for --fetch");
  ingest->add_option("--id", id, "Document id (default: next doc-<n>)");
  ingest->add_option("--title", title, "Document title");
  ingest->add_flag("--replace", replace, "Replace an existing document");
  ingest->add_flag("--force", force, "Drop contradictory annotated relations");
  ingest->add_flag("--json", common.json, "Print the ingest report as JSON");

  std::string query, mode = "hybrid";
  std::size_t k = 10;
  CLI::App *search = app.add_subcommand("search", "Search the store");
  add_store(search);
  search->add_option("--query", query, "Query text")->required();
  search->add_option("--mode", mode, "hybrid, keyword or graph")
      ->check(CLI::IsMember({"hybrid", "keyword", "graph"}));
  search->add_option("-k", k, "Number of results")->check(CLI::Range(1, 100000));
  search->add_flag("--json", common.json, "Print results as JSON");

  std::string relations_file;
  bool score = false, timeline = false, missing_third = false;
  CLI::App *reason = app.add_subcommand("reason", "Close and check a relation file");
  reason->add_option("--relations", relations_file, "Lines of \"TYPE a b\"")
      ->required()
      ->check(CLI::ExistingFile);
  reason->add_flag("--score", score, "Print the satisfaction score");
  reason->add_flag("--timeline", timeline, "Print timeline layers");
  reason->add_flag("--count-missing-third", missing_third,
                   "Score composable pairs without a third relation as violations");
  reason->add_flag("--json", common.json, "Print the full report as JSON");

  std::string format = "json";
  CLI::App *exporter = app.add_subcommand("export-graph", "Print a stored case graph");
  add_store(exporter);
  exporter->add_option("--id", id, "Document id")->required();
  exporter->add_option("--format", format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));

  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  CLI::App *serve = app.add_subcommand("serve", "Run the HTTP API");
  add_store(serve);
  serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--fixtures", fixtures, "Fixture directory for article fetches");
  serve->add_option("--static", static_dir, "Directory served at /")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*ingest) {
      if (text_file.empty() && xml_file.empty() && ann_file.empty() && fetch_id.empty()) {
        std::cerr << "error: one of --text, --xml, --ann/--txt or --fetch is required\n";
        return kExitError;
      }
      return RunIngest(common, text_file, xml_file, ann_file, txt_file, fetch_id, fixtures,
                       id, title, replace, force);
    }
    if (*search) return RunSearch(common, query, mode, k);
    if (*reason) return RunReason(relations_file, common.json, score, timeline, missing_third);
    if (*exporter) return RunExport(common, id, format);
    if (*serve) return RunServe(common, host, port, fixtures, static_dir);
  } catch (const cg::Error &e) {
    std::cerr << "error (" << cg::ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    if (!e.detail().is_null()) std::cerr << e.detail().dump() << "\n";
    return e.kind() == cg::ErrorKind::kInconsistent ? kExitInconsistent : kExitError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
