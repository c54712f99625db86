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

#include "casegraph/service.h"

#include <charconv>
#include <vector>

#include "casegraph/text.h"
#include "httplib.h"

namespace casegraph {

int HttpStatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kSchema:
      return 400;
    case ErrorKind::kNotFound:
      return 404;
    case ErrorKind::kAlreadyExists:
      return 409;
    case ErrorKind::kInconsistent:
    case ErrorKind::kDanglingReference:
    case ErrorKind::kValidation:
      return 422;
    case ErrorKind::kNetwork:
    case ErrorKind::kTimeout:
    case ErrorKind::kHttpStatus:
      return 502;
    case ErrorKind::kIo:
    case ErrorKind::kChecksum:
    case ErrorKind::kInternal:
      return 500;
  }
  return 500;
}

namespace {

HttpResponse ErrorResponse(int status, std::string_view kind, const std::string &message,
                           Json detail = nullptr) {
  return {status,
          {{"error", {{"kind", kind}, {"message", message}, {"detail", detail}}}}};
}

std::vector<std::string> Segments(const std::string &path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) out.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::size_t QueryIndex(const std::map<std::string, std::string> &query, const char *key,
                       std::size_t fallback) {
  auto it = query.find(key);
  if (it == query.end()) return fallback;
  std::size_t value = 0;
  const std::string &s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("query parameter ") + key + " must be a non-negative integer",
                {{"parameter", key}, {"value", s}});
  }
  return value;
}

bool QueryBool(const std::map<std::string, std::string> &query, const char *key,
               bool fallback) {
  auto it = query.find(key);
  if (it == query.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw Error(ErrorKind::kInvalidArgument,
              std::string("query parameter ") + key + " must be true or false",
              {{"parameter", key}, {"value", it->second}});
}

SearchMode ParseMode(const std::string &mode, const std::string &path) {
  if (mode == "hybrid") return SearchMode::kHybrid;
  if (mode == "keyword") return SearchMode::kKeyword;
  if (mode == "graph") return SearchMode::kGraph;
  ThrowSchema(path, "expected \"hybrid\", \"keyword\" or \"graph\"");
}

struct RouteInfo {
  const char *method;
  const char *path;
  const char *summary;
  std::vector<int> statuses;
};

const std::vector<RouteInfo> &Routes() {
  static const std::vector<RouteInfo> kRoutes = {
      {"GET", "/api/health", "liveness and document count", {200}},
      {"GET", "/api/endpoints", "this manifest", {200}},
      {"GET", "/api/documents", "page of {docId, title} ordered by docId", {200, 400}},
      {"POST", "/api/documents",
       "ingest text, xml, text+ann or a fetched article; returns the ingest report",
       {201, 400, 404, 409, 422, 502}},
      {"GET", "/api/documents/{id}", "document bundle with annotations", {200, 404}},
      {"DELETE", "/api/documents/{id}", "remove a document", {200, 404}},
      {"GET", "/api/documents/{id}/graph",
       "case graph; closure=true adds closed temporal relations and timeline layers",
       {200, 400, 404}},
      {"PUT", "/api/documents/{id}/annotations",
       "replace annotations, rebuild the graph and re-index",
       {200, 400, 404, 422}},
      {"POST", "/api/search", "hybrid, keyword or graph search", {200, 400}},
      {"POST", "/api/reason", "closure, consistency, satisfaction score and timeline",
       {200, 400}},
  };
  return kRoutes;
}

}  // namespace

Json ReasonReport(const std::vector<RelationAssertion> &relations,
                  temporal::ScoreOptions options) {
  temporal::TemporalGraph graph = temporal::Normalize(relations);
  temporal::ConsistencyReport report = temporal::CheckConsistency(graph);
  Json timeline = nullptr;
  if (report.consistent) timeline = TimelineToJson(temporal::TopologicalTimeline(graph));
  return {{"closure", ClosureToJson(temporal::TransitiveClosure(graph))},
          {"consistency", ToJson(report)},
          {"satisfactionScore", ToJson(temporal::ScoreSatisfaction(relations, options))},
          {"timeline", timeline}};
}

Json Service::EndpointManifest() {
  Json routes = Json::array();
  for (const RouteInfo &r : Routes()) {
    routes.push_back({{"method", r.method},
                      {"path", r.path},
                      {"summary", r.summary},
                      {"statuses", r.statuses}});
  }
  return {{"endpoints", routes}};
}

Service::Service(Pipeline *pipeline, ServiceOptions options)
    : pipeline_(pipeline), options_(std::move(options)) {
  if (!pipeline_->store()) {
    throw Error(ErrorKind::kInvalidArgument, "the service requires a document store");
  }
}

HttpResponse Service::Handle(const std::string &method, const std::string &path,
                             const std::map<std::string, std::string> &query,
                             const std::string &body) const {
  try {
    return Route(method, path, query, body);
  } catch (const Error &e) {
    return {HttpStatusFor(e.kind()), ErrorToJson(e)};
  } catch (const std::exception &e) {
    return ErrorResponse(500, "internal", e.what());
  }
}

HttpResponse Service::Route(const std::string &method, const std::string &path,
                            const std::map<std::string, std::string> &query,
                            const std::string &body) const {
  std::vector<std::string> seg = Segments(path);
  auto not_allowed = [&] {
    return ErrorResponse(405, "method_not_allowed",
                         method + " is not supported on " + path);
  };
  if (seg.size() < 2 || seg[0] != "api") {
    return ErrorResponse(404, "not_found", "no route for " + path);
  }
  const std::string &resource = seg[1];
  if (seg.size() == 2) {
    if (resource == "health") return method == "GET" ? Health() : not_allowed();
    if (resource == "endpoints") {
      return method == "GET" ? HttpResponse{200, EndpointManifest()} : not_allowed();
    }
    if (resource == "search") return method == "POST" ? Search(body) : not_allowed();
    if (resource == "reason") return method == "POST" ? Reason(body) : not_allowed();
    if (resource == "documents") {
      if (method == "GET") return ListDocuments(query);
      if (method == "POST") return PostDocument(body);
      return not_allowed();
    }
  }
  if (resource == "documents" && seg.size() == 3) {
    if (method == "GET") return GetDocument(seg[2]);
    if (method == "DELETE") return DeleteDocument(seg[2]);
    return not_allowed();
  }
  if (resource == "documents" && seg.size() == 4) {
    if (seg[3] == "graph") return method == "GET" ? GetGraph(seg[2], query) : not_allowed();
    if (seg[3] == "annotations") {
      return method == "PUT" ? PutAnnotations(seg[2], body) : not_allowed();
    }
  }
  return ErrorResponse(404, "not_found", "no route for " + path);
}

HttpResponse Service::Health() const {
  return {200, {{"status", "ok"}, {"docs", pipeline_->store()->size()}}};
}

HttpResponse Service::ListDocuments(const std::map<std::string, std::string> &query) const {
  std::size_t offset = QueryIndex(query, "offset", 0);
  std::size_t limit = QueryIndex(query, "limit", options_.default_page);
  if (limit > options_.max_page) {
    throw Error(ErrorKind::kInvalidArgument,
                "limit must be at most " + std::to_string(options_.max_page));
  }
  DocumentPage page = pipeline_->store()->List(offset, limit);
  Json items = Json::array();
  for (const DocumentSummary &s : page.items) {
    items.push_back({{"docId", s.doc_id}, {"title", s.title}});
  }
  return {200,
          {{"items", items}, {"total", page.total}, {"offset", offset}, {"limit", limit}}};
}

HttpResponse Service::GetDocument(const std::string &id) const {
  DocumentBundle bundle = pipeline_->store()->Get(id);
  Json out = ToJson(bundle.document);
  out["annotations"] = bundle.annotations ? ToJson(*bundle.annotations) : Json(nullptr);
  out["version"] = bundle.version;
  return {200, out};
}

HttpResponse Service::DeleteDocument(const std::string &id) const {
  if (!pipeline_->store()->Contains(id)) {
    throw Error(ErrorKind::kNotFound, "unknown document " + id, {{"docId", id}});
  }
  pipeline_->Delete(id);
  return {200, {{"docId", id}, {"deleted", true}}};
}

HttpResponse Service::PostDocument(const std::string &body) const {
  Json request = ParseJson(body);
  JsonObject obj(request, "$",
                 {"docId", "title", "text", "xml", "ann", "externalId", "replace", "force"});
  IngestOptions options;
  options.replace = obj.Bool("replace", false);
  options.force = obj.Bool("force", false);
  std::string doc_id = obj.String("docId", "");
  if (doc_id.empty()) doc_id = pipeline_->NextDocId();
  if (doc_id.find('/') != std::string::npos) {
    ThrowSchema("$.docId", "must not contain '/'");
  }
  std::string title = obj.String("title", "");

  bool has_text = obj.Has("text"), has_xml = obj.Has("xml"), has_ann = obj.Has("ann"),
       has_ext = obj.Has("externalId");
  int sources = (has_text || has_ann ? 1 : 0) + (has_xml ? 1 : 0) + (has_ext ? 1 : 0);
  if (sources != 1 || (has_ann && !has_text)) {
    ThrowSchema("$", "provide exactly one of text, xml, text+ann or externalId");
  }

  IngestReport report;
  if (has_ext) {
    std::string external_id = obj.String("externalId");
    options.source_meta = {{"provenance", "pubmed"}, {"externalId", external_id}};
    report = pipeline_->IngestXml(doc_id, FetchArticle(external_id, options_.fetch), options);
  } else if (has_xml) {
    report = pipeline_->IngestXml(doc_id, obj.String("xml"), options);
  } else if (has_ann) {
    report = pipeline_->IngestStandoff(doc_id, title, obj.String("text"), obj.String("ann"),
                                       options);
  } else {
    report = pipeline_->IngestText(doc_id, title, obj.String("text"), options);
  }
  return {201, ToJson(report)};
}

HttpResponse Service::GetGraph(const std::string &id,
                               const std::map<std::string, std::string> &query) const {
  bool closure = QueryBool(query, "closure", false);
  DocumentBundle bundle = pipeline_->store()->Get(id);
  Json out = ToJson(bundle.graph);
  if (closure) {
    std::vector<RelationAssertion> temporal_edges;
    for (const GraphEdge &e : bundle.graph.edges) {
      if (IsTemporal(e.label)) temporal_edges.push_back({"", e.label, e.source, e.target});
    }
    temporal::TemporalGraph graph = temporal::Normalize(temporal_edges);
    for (const GraphNode &n : bundle.graph.nodes) graph.AddNode(n.node_id);
    out["closure"] = ClosureToJson(temporal::TransitiveClosure(graph));
    out["timeline"] = TimelineToJson(temporal::TopologicalTimeline(graph));
  }
  return {200, out};
}

HttpResponse Service::PutAnnotations(const std::string &id, const std::string &body) const {
  AnnotationSet set = AnnotationSetFromJson(ParseJson(body));
  IngestReport report = pipeline_->ReplaceAnnotations(id, set);
  temporal::ConsistencyReport consistency = CheckGraphConsistency(report.graph);
  return {200,
          {{"docId", id},
           {"version", report.version},
           {"consistency", ToJson(consistency)},
           {"graph", ToJson(report.graph)}}};
}

HttpResponse Service::Search(const std::string &body) const {
  Json request = ParseJson(body);
  JsonObject obj(request, "$", {"query", "mode", "k"});
  std::string query = obj.String("query");
  SearchMode mode = ParseMode(obj.String("mode", "hybrid"), "$.mode");
  std::size_t k = obj.Index("k", options_.default_k);
  if (k < 1 || k > options_.max_k) {
    ThrowSchema("$.k", "must be between 1 and " + std::to_string(options_.max_k));
  }
  return {200, ToJson(pipeline_->engine().Search(query, mode, pipeline_->gazetteer(), k))};
}

HttpResponse Service::Reason(const std::string &body) const {
  Json request = ParseJson(body);
  temporal::ScoreOptions score_options;
  std::vector<RelationAssertion> relations;
  if (request.is_object()) {
    JsonObject obj(request, "$", {"relations", "countMissingThird"});
    relations = RelationListFromJson(obj.Get("relations"), "$.relations");
    score_options.count_missing_third = obj.Bool("countMissingThird", false);
  } else {
    relations = RelationListFromJson(request, "$");
  }
  return {200, ReasonReport(relations, score_options)};
}

namespace {

// Error messages may echo request bytes that are not valid UTF-8.
std::string Serialize(const Json &body) {
  return body.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace

void Service::Mount(httplib::Server *server, const std::filesystem::path &static_dir) const {
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    std::map<std::string, std::string> query;
    for (const auto &[k, v] : req.params) query.emplace(k, v);
    HttpResponse out = Handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(Serialize(out.body), "application/json");
  };
  if (!static_dir.empty()) server->set_mount_point("/", static_dir.string());
  server->Get("/api/.*", handler);
  server->Post("/api/.*", handler);
  server->Put("/api/.*", handler);
  server->Delete("/api/.*", handler);
  server->Patch("/api/.*", handler);
  server->set_error_handler([](const httplib::Request &req, httplib::Response &res) {
    if (!res.body.empty()) return;
    res.set_content(Serialize(ErrorResponse(res.status, res.status == 404 ? "not_found" : "http",
                                            "no route for " + req.path)
                                  .body),
                    "application/json");
  });
}

}  // namespace casegraph
