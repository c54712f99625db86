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

#include "casegraph/ingest.h"

#include <cstdlib>
#include <set>

#include "casegraph/error.h"
#include "casegraph/text.h"
#include "httplib.h"

namespace casegraph {

namespace {

void CollectText(const XmlElement &element, std::string *out,
                 std::set<std::string> *unknown) {
  for (const XmlElement::Child &child : element.children) {
    if (child.element) {
      unknown->insert(child.element->name);
      CollectText(*child.element, out, unknown);
    } else {
      *out += child.text;
    }
  }
}

std::u32string CollapseSpace(const std::u32string &s) {
  std::u32string out;
  bool space = false;
  for (char32_t c : s) {
    if (text::IsSpace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(U' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string ElementText(const XmlElement &element, std::set<std::string> *unknown) {
  std::string raw;
  CollectText(element, &raw, unknown);
  return text::Encode(CollapseSpace(text::Decode(raw)));
}

std::string Location(const XmlElement &e) {
  return "line " + std::to_string(e.line) + ", column " + std::to_string(e.column);
}

std::vector<RelationAssertion> TemporalEdges(const CaseGraph &graph) {
  std::vector<RelationAssertion> out;
  for (const GraphEdge &e : graph.edges) {
    if (IsTemporal(e.label)) out.push_back({e.source + "->" + e.target, e.label, e.source, e.target});
  }
  return out;
}

// Does `type`(s, t) contribute `link` to a witness cycle?
bool Implicated(RelationType type, const std::string &s, const std::string &t,
                const temporal::TemporalLink &link) {
  switch (type) {
    case RelationType::kBefore:
      return link.type == RelationType::kBefore && link.source == s && link.target == t;
    case RelationType::kAfter:
      return link.type == RelationType::kBefore && link.source == t && link.target == s;
    case RelationType::kOverlap:
      return link.type == RelationType::kOverlap &&
             ((link.source == s && link.target == t) ||
              (link.source == t && link.target == s));
    default:
      return false;
  }
}

Document PlainDocument(const std::string &doc_id, const std::string &title,
                       const std::string &body, const IngestOptions &options) {
  Document doc;
  doc.doc_id = doc_id;
  doc.title = title;
  doc.text = body;
  doc.sentences = SegmentSentences(body);
  doc.source_meta["provenance"] = "user-upload";
  for (const auto &[k, v] : options.source_meta) doc.source_meta[k] = v;
  return doc;
}

}  // namespace

Document ArticleToDocument(const std::string &doc_id, std::string_view xml,
                           std::vector<std::string> *warnings) {
  auto warn = [&](const std::string &w) {
    if (warnings) warnings->push_back(w);
  };
  XmlElement root = ParseXml(xml);
  if (root.name != "article") {
    throw Error(ErrorKind::kSchema,
                "expected <article> root element, found <" + root.name + ">",
                {{"line", root.line}, {"column", root.column}});
  }

  Document doc;
  doc.doc_id = doc_id;
  std::u32string body;
  std::set<std::string> unknown_inline;
  bool has_title = false;
  for (const XmlElement::Child &child : root.children) {
    if (!child.element) {
      if (!CollapseSpace(text::Decode(child.text)).empty()) {
        warn("text directly inside <article> ignored");
      }
      continue;
    }
    const XmlElement &e = *child.element;
    if (e.name == "title") {
      doc.title = ElementText(e, &unknown_inline);
      has_title = true;
      continue;
    }
    if (e.name != "sec") {
      warn("unknown element <" + e.name + "> at " + Location(e) + " ignored");
      continue;
    }
    const std::string *name = e.Attribute("name");
    Section section;
    section.name = name ? *name : "";
    if (!name) warn("<sec> at " + Location(e) + " has no name attribute");
    bool first = true;
    for (const XmlElement::Child &pc : e.children) {
      if (!pc.element) {
        if (!CollapseSpace(text::Decode(pc.text)).empty()) {
          warn("text directly inside <sec> at " + Location(e) + " ignored");
        }
        continue;
      }
      if (pc.element->name != "p") {
        warn("unknown element <" + pc.element->name + "> at " +
             Location(*pc.element) + " ignored");
        continue;
      }
      std::u32string paragraph = text::Decode(ElementText(*pc.element, &unknown_inline));
      if (paragraph.empty()) continue;
      if (!body.empty()) body += U"\n\n";
      if (first) section.span.start = body.size();
      first = false;
      std::size_t base = body.size();
      body += paragraph;
      section.span.end = body.size();
      for (Span s : SegmentSentences(std::u32string_view(paragraph), base)) {
        doc.sentences.push_back(s);
      }
    }
    if (first) {
      warn("section \"" + section.name + "\" has no text");
      continue;
    }
    doc.sections.push_back(std::move(section));
  }
  if (!has_title) warn("article has no <title>");
  for (const std::string &name : unknown_inline) {
    warn("inline element <" + name + "> kept as plain text");
  }
  doc.text = text::Encode(body);
  return doc;
}

Json ToJson(const IngestReport &report) {
  Json entities = Json::array(), relations = Json::array();
  for (const Entity &e : report.entities) entities.push_back(ToJson(e));
  for (const RelationAssertion &r : report.relations) relations.push_back(ToJson(r));
  Json confidence = Json::object();
  for (const auto &[id, source] : report.confidence) {
    confidence[id] = RelationSourceName(source);
  }
  return {{"docId", report.document.doc_id},
          {"title", report.document.title},
          {"version", report.version},
          {"indexed", report.indexed},
          {"document", ToJson(report.document)},
          {"entities", entities},
          {"relations", relations},
          {"confidence", confidence},
          {"graph", ToJson(report.graph)},
          {"warnings", report.warnings}};
}

temporal::ConsistencyReport CheckGraphConsistency(const CaseGraph &graph) {
  return temporal::CheckConsistency(temporal::Normalize(TemporalEdges(graph)));
}

std::vector<RelationAssertion> RepairTemporalConflicts(
    const std::vector<Entity> &entities, std::vector<RelationAssertion> relations,
    std::vector<RelationAssertion> *dropped) {
  const std::map<std::string, std::string> node_of = MergedNodeIds(entities, relations);
  Document scratch;
  while (true) {
    temporal::ConsistencyReport report =
        CheckGraphConsistency(BuildCaseGraph(scratch, entities, relations));
    if (report.consistent) return relations;
    bool removed = false;
    for (std::size_t i = relations.size(); i-- > 0 && !removed;) {
      const RelationAssertion &r = relations[i];
      if (!IsTemporal(r.type)) continue;
      const std::string &s = node_of.at(r.source), &t = node_of.at(r.target);
      for (const temporal::WitnessChain &chain : report.witnesses) {
        for (const temporal::TemporalLink &link : chain) {
          if (Implicated(r.type, s, t, link)) removed = true;
        }
      }
      if (removed) {
        if (dropped) dropped->push_back(r);
        relations.erase(relations.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    if (!removed) {
      throw Error(ErrorKind::kInternal, "cannot attribute temporal conflict to a relation",
                  ToJson(report));
    }
  }
}

Pipeline::Pipeline(Gazetteer gazetteer, SearchEngine *engine, Store *store)
    : gazetteer_(std::move(gazetteer)), engine_(engine), store_(store) {}

bool Pipeline::Contains(const std::string &doc_id) const {
  if (store_) return store_->Contains(doc_id);
  std::lock_guard lock(write_mu_);
  return memory_docs_.count(doc_id) > 0;
}

std::string Pipeline::NextDocId() const {
  for (std::size_t n = 1;; ++n) {
    std::string id = "doc-" + std::to_string(n);
    if (!Contains(id) && !engine_->Contains(id)) return id;
  }
}

IngestReport Pipeline::Commit(Document doc, std::vector<Entity> entities,
                              std::vector<RelationAssertion> relations,
                              std::optional<AnnotationSet> annotations,
                              IngestReport report, const IngestOptions &options,
                              bool must_exist) {
  if (doc.doc_id.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "document id must not be empty");
  }
  CaseGraph graph = BuildCaseGraph(doc, entities, relations);
  temporal::ConsistencyReport consistency = CheckGraphConsistency(graph);
  if (!consistency.consistent) {
    throw Error(ErrorKind::kInconsistent,
                "temporal relations of " + doc.doc_id + " contradict each other",
                ToJson(consistency));
  }

  std::lock_guard lock(write_mu_);
  bool exists = store_ ? store_->Contains(doc.doc_id) : memory_docs_.count(doc.doc_id) > 0;
  if (must_exist && !exists) {
    throw Error(ErrorKind::kNotFound, "unknown document " + doc.doc_id,
                {{"docId", doc.doc_id}});
  }
  if (!must_exist && exists && !options.replace) {
    throw Error(ErrorKind::kAlreadyExists, "document " + doc.doc_id + " already exists",
                {{"docId", doc.doc_id}});
  }
  if (store_) {
    report.version = store_->Put(doc, annotations, graph);
  } else {
    memory_docs_[doc.doc_id] = doc;
  }
  if (options.index) {
    engine_->IndexDocument(doc, graph);
    report.indexed = true;
  } else {
    engine_->RemoveDocument(doc.doc_id);
  }
  report.document = std::move(doc);
  report.entities = std::move(entities);
  report.relations = std::move(relations);
  report.graph = std::move(graph);
  return report;
}

IngestReport Pipeline::IngestText(const std::string &doc_id, const std::string &title,
                                  const std::string &body, const IngestOptions &options) {
  Document doc = PlainDocument(doc_id, title, body, options);
  ExtractionResult extraction =
      ExtractRelations(doc, ExtractEntities(doc.text, gazetteer_), options.extraction);
  IngestReport report;
  report.confidence = extraction.confidence;
  report.warnings = extraction.dropped;
  AnnotationSet annotations{extraction.entities, extraction.relations, {}};
  try {
    return Commit(std::move(doc), extraction.entities, extraction.relations,
                  std::move(annotations), std::move(report), options, false);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kInconsistent) throw;
    throw Error(ErrorKind::kInternal, "extraction produced inconsistent relations",
                e.detail());
  }
}

IngestReport Pipeline::IngestXml(const std::string &doc_id, std::string_view xml,
                                 const IngestOptions &options) {
  IngestReport report;
  Document doc = ArticleToDocument(doc_id, xml, &report.warnings);
  doc.source_meta["provenance"] = "user-upload";
  for (const auto &[k, v] : options.source_meta) doc.source_meta[k] = v;
  ExtractionResult extraction =
      ExtractRelations(doc, ExtractEntities(doc.text, gazetteer_), options.extraction);
  report.confidence = extraction.confidence;
  for (std::string &d : extraction.dropped) report.warnings.push_back(std::move(d));
  AnnotationSet annotations{extraction.entities, extraction.relations, {}};
  try {
    return Commit(std::move(doc), extraction.entities, extraction.relations,
                  std::move(annotations), std::move(report), options, false);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::kInconsistent) throw;
    throw Error(ErrorKind::kInternal, "extraction produced inconsistent relations",
                e.detail());
  }
}

IngestReport Pipeline::IngestStandoff(const std::string &doc_id, const std::string &title,
                                      const std::string &body, std::string_view ann,
                                      const IngestOptions &options) {
  IngestReport report;
  AnnotationSet set = ParseStandoff(body, ann, &report.warnings);
  Document doc = PlainDocument(doc_id, title, body, options);
  if (options.force) {
    std::vector<RelationAssertion> dropped;
    set.relations = RepairTemporalConflicts(set.entities, set.relations, &dropped);
    for (const RelationAssertion &r : dropped) {
      report.warnings.push_back("dropped contradictory relation " + r.id + " " +
                                std::string(RelationTypeName(r.type)) + "(" + r.source +
                                ", " + r.target + ")");
    }
  }
  return Commit(std::move(doc), set.entities, set.relations, set, std::move(report),
                options, false);
}

IngestReport Pipeline::ReplaceAnnotations(const std::string &doc_id,
                                          const AnnotationSet &annotations) {
  Document doc;
  if (store_) {
    doc = store_->Get(doc_id).document;
  } else {
    std::lock_guard lock(write_mu_);
    auto it = memory_docs_.find(doc_id);
    if (it == memory_docs_.end()) {
      throw Error(ErrorKind::kNotFound, "unknown document " + doc_id, {{"docId", doc_id}});
    }
    doc = it->second;
  }
  std::vector<Violation> violations =
      ValidateAnnotations(doc, annotations.entities, annotations.relations);
  std::set<std::string> ids;
  for (const Entity &e : annotations.entities) ids.insert(e.id);
  for (const AnnotationNote &n : annotations.notes) {
    if (!ids.count(n.target)) violations.push_back({n.target, "note targets unknown id"});
  }
  if (!violations.empty()) {
    Json detail = Json::array();
    for (const Violation &v : violations) {
      detail.push_back({{"subject", v.subject}, {"message", v.message}});
    }
    throw Error(ErrorKind::kValidation,
                "annotations are invalid: " + violations.front().subject + ": " +
                    violations.front().message,
                {{"violations", detail}});
  }
  IngestOptions options;
  options.replace = true;
  return Commit(std::move(doc), annotations.entities, annotations.relations,
                annotations, IngestReport{}, options, true);
}

std::size_t Pipeline::RebuildIndex() {
  std::lock_guard lock(write_mu_);
  SearchEngine fresh;
  std::size_t n = 0;
  if (store_) {
    for (const std::string &id : store_->Ids()) {
      DocumentBundle bundle = store_->Get(id);
      fresh.IndexDocument(bundle.document, bundle.graph);
      ++n;
    }
  }
  engine_->Restore(fresh.inverted_index(), fresh.graph_index());
  return n;
}

bool Pipeline::WarmIndex() {
  if (!store_) return false;
  namespace fs = std::filesystem;
  std::optional<fs::path> snapshot = store_->LatestSnapshot();
  fs::path manifest = store_->root() / "manifest.json";
  if (snapshot) {
    bool fresh = !fs::exists(manifest) ||
                 fs::last_write_time(*snapshot) >= fs::last_write_time(manifest);
    if (fresh) {
      try {
        auto [inverted, graphs] = LoadIndexes(*snapshot);
        if (inverted.doc_count() == store_->size()) {
          engine_->Restore(std::move(inverted), std::move(graphs));
          return true;
        }
      } catch (const Error &) {
        // Fall through to a rebuild.
      }
    }
  }
  RebuildIndex();
  store_->SnapshotIndexes(engine_->inverted_index(), engine_->graph_index());
  return false;
}

bool Pipeline::Delete(const std::string &doc_id) {
  std::lock_guard lock(write_mu_);
  bool existed = false;
  if (store_) {
    if (store_->Contains(doc_id)) {
      store_->Delete(doc_id);
      existed = true;
    }
  } else {
    existed = memory_docs_.erase(doc_id) > 0;
  }
  return engine_->RemoveDocument(doc_id) || existed;
}

FetchConfig FetchConfig::FromEnvironment(std::filesystem::path fixture_dir) {
  FetchConfig config;
  config.fixture_dir = std::move(fixture_dir);
  if (const char *url = std::getenv("CASEGRAPH_FETCH_BASE_URL")) {
    config.base_url_template = url;
  }
  return config;
}

std::string FetchArticle(const std::string &external_id, const FetchConfig &config) {
  if (external_id.empty() ||
      external_id.find_first_of("/\\") != std::string::npos || external_id == "." ||
      external_id == "..") {
    throw Error(ErrorKind::kInvalidArgument, "invalid article id \"" + external_id + "\"");
  }
  if (config.base_url_template.empty()) {
    std::filesystem::path path = config.fixture_dir / (external_id + ".xml");
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::kNotFound, "no fixture for article " + external_id,
                  {{"path", path.string()}});
    }
    return ReadFile(path);
  }

  std::string url = config.base_url_template;
  for (std::size_t at; (at = url.find("{id}")) != std::string::npos;) {
    url.replace(at, 4, external_id);
  }
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "fetch URL must start with http:// (got " + url + ")");
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_follow_location(true);

  httplib::Error last = httplib::Error::Success;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    httplib::Result result = client.Get(path);
    if (result) {
      if (result->status < 200 || result->status >= 300) {
        throw Error(ErrorKind::kHttpStatus,
                    "GET " + url + " returned status " + std::to_string(result->status),
                    {{"status", result->status}, {"url", url}});
      }
      return result->body;
    }
    last = result.error();
  }
  bool timeout = last == httplib::Error::ConnectionTimeout || last == httplib::Error::Read;
  throw Error(timeout ? ErrorKind::kTimeout : ErrorKind::kNetwork,
              "GET " + url + " failed: " + httplib::to_string(last),
              {{"url", url}});
}

}  // namespace casegraph
