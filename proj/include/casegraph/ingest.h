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

#ifndef CASEGRAPH_INGEST_H_
#define CASEGRAPH_INGEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casegraph/annotation_io.h"
#include "casegraph/extraction.h"
#include "casegraph/index.h"
#include "casegraph/json_codec.h"
#include "casegraph/storage.h"

namespace casegraph {

// Minimal XML element tree. Attributes keep document order.
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  struct Child;
  std::vector<Child> children;
  std::size_t line = 0;
  std::size_t column = 0;

  const std::string *Attribute(std::string_view key) const;
};

struct XmlElement::Child {
  // Exactly one of the two is set.
  std::optional<XmlElement> element;
  std::string text;
};

// Parses one root element. Supports the XML declaration, comments, CDATA,
// processing instructions, DOCTYPE (skipped), the five predefined entities
// and numeric character references. Errors raise Error(kInvalidArgument) with
// {"line", "column"} (1-based, counted in code points).
XmlElement ParseXml(std::string_view xml);

// Article schema:
//   <article>
//     <title>...</title>
//     <sec name="..."><p>...</p>...</sec>...
//   </article>
// Paragraph whitespace is collapsed, paragraphs are separated by one blank
// line, and each section span covers its paragraphs. Sentences are segmented
// within paragraphs. Unknown elements are reported in `warnings`; inline
// elements inside <p> contribute their text.
Document ArticleToDocument(const std::string &doc_id, std::string_view xml,
                           std::vector<std::string> *warnings);

struct IngestReport {
  Document document;
  std::vector<Entity> entities;
  std::vector<RelationAssertion> relations;
  std::map<std::string, RelationSource> confidence;  // extraction only
  CaseGraph graph;
  std::vector<std::string> warnings;
  std::uint64_t version = 0;  // store version, 0 when not persisted
  bool indexed = false;
};

Json ToJson(const IngestReport &report);

struct IngestOptions {
  bool replace = false;  // allow re-ingesting an existing doc id
  bool force = false;    // standoff: drop contradictory relations instead of failing
  bool index = true;
  ExtractionOptions extraction;
  // Merged into Document.source_meta; "provenance" defaults to "user-upload".
  std::map<std::string, std::string> source_meta;
};

// Drives documents through extraction, graph building, indexing and
// persistence. Safe to share between threads; writes are serialized.
class Pipeline {
 public:
  // `store` may be null for an in-memory pipeline.
  Pipeline(Gazetteer gazetteer, SearchEngine *engine, Store *store = nullptr);

  // Throws Error(kAlreadyExists) for a known doc id unless options.replace.
  IngestReport IngestText(const std::string &doc_id, const std::string &title,
                          const std::string &text, const IngestOptions &options = {});
  IngestReport IngestXml(const std::string &doc_id, std::string_view xml,
                         const IngestOptions &options = {});
  // Uses the annotations as given. Contradictory temporal relations raise
  // Error(kInconsistent) with the consistency report, unless options.force,
  // in which case relations taking part in contradictions are dropped and
  // reported as warnings.
  IngestReport IngestStandoff(const std::string &doc_id, const std::string &title,
                              const std::string &text, std::string_view ann,
                              const IngestOptions &options = {});

  // Replaces the stored annotations of an existing document and re-indexes
  // it. Throws Error(kNotFound), Error(kInconsistent) or validation errors.
  IngestReport ReplaceAnnotations(const std::string &doc_id,
                                  const AnnotationSet &annotations);

  bool Contains(const std::string &doc_id) const;
  // Unused id of the form "doc-<n>".
  std::string NextDocId() const;
  // Clears the engine and re-indexes every stored document.
  std::size_t RebuildIndex();
  // Loads the newest snapshot when it is at least as recent as the store
  // manifest; otherwise rebuilds from the store and writes a new snapshot.
  // Returns true when a snapshot was loaded.
  bool WarmIndex();
  bool Delete(const std::string &doc_id);

  const Gazetteer &gazetteer() const { return gazetteer_; }
  SearchEngine &engine() { return *engine_; }
  Store *store() { return store_; }

 private:
  IngestReport Commit(Document doc, std::vector<Entity> entities,
                      std::vector<RelationAssertion> relations,
                      std::optional<AnnotationSet> annotations,
                      IngestReport report, const IngestOptions &options,
                      bool must_exist);

  Gazetteer gazetteer_;
  SearchEngine *engine_;
  Store *store_;
  mutable std::mutex write_mu_;
  // Documents of a pipeline without a store.
  std::map<std::string, Document> memory_docs_;
};

// Relations of `relations` that survive dropping contradictions: while the
// graph built from them is inconsistent, the last-listed temporal relation
// taking part in a witness is removed. Removed relations are appended to
// `dropped`.
std::vector<RelationAssertion> RepairTemporalConflicts(
    const std::vector<Entity> &entities, std::vector<RelationAssertion> relations,
    std::vector<RelationAssertion> *dropped);

// Checks the temporal edges of a case graph.
temporal::ConsistencyReport CheckGraphConsistency(const CaseGraph &graph);

struct FetchConfig {
  // Remote mode when non-empty: "{id}" is replaced by the external id.
  std::string base_url_template;
  std::filesystem::path fixture_dir = "fixtures/articles";
  std::chrono::milliseconds timeout{10000};
  int retries = 1;

  // Reads CASEGRAPH_FETCH_BASE_URL.
  static FetchConfig FromEnvironment(std::filesystem::path fixture_dir);
};

// Fixture mode reads <fixture_dir>/<id>.xml (Error(kNotFound) when missing).
// Remote mode issues a GET with the configured timeout and retries once on
// network failure: Error(kNetwork), Error(kTimeout), or Error(kHttpStatus)
// with {"status": code} for non-2xx responses.
std::string FetchArticle(const std::string &external_id, const FetchConfig &config);

}  // namespace casegraph

#endif  // CASEGRAPH_INGEST_H_
