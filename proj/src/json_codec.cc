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

#include "casegraph/json_codec.h"

#include <algorithm>
#include <cctype>
#include <limits>

#include "casegraph/text.h"

namespace casegraph {

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error &e) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("malformed JSON: ") + e.what(),
                {{"byte", e.byte}});
  } catch (const Json::exception &e) {
    // Numeric overflow and similar lexer-adjacent failures carry no offset.
    throw Error(ErrorKind::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

void ThrowSchema(const std::string &path, const std::string &message) {
  throw Error(ErrorKind::kSchema, path + ": " + message, {{"path", path}});
}

namespace {

std::string TypeName(const Json &v) { return v.type_name(); }

std::string ElementPath(const std::string &path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json &RequireArray(const Json &v, const std::string &path) {
  if (!v.is_array()) ThrowSchema(path, "expected array, got " + TypeName(v));
  return v;
}

std::string RequireString(const Json &v, const std::string &path) {
  if (!v.is_string()) ThrowSchema(path, "expected string, got " + TypeName(v));
  return v.get<std::string>();
}

RelationType RequireRelationType(const Json &v, const std::string &path) {
  std::string name = RequireString(v, path);
  std::optional<RelationType> type = ParseRelationType(name);
  if (!type) ThrowSchema(path, "unknown relation type \"" + name + "\"");
  return *type;
}

Json Triple(RelationType type, const std::string &a, const std::string &b) {
  return Json::array({RelationTypeName(type), a, b});
}

}  // namespace

JsonObject::JsonObject(const Json &value, std::string path,
                       std::initializer_list<std::string_view> allowed)
    : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) {
    ThrowSchema(path_, "expected object, got " + TypeName(value_));
  }
  for (const auto &[key, unused] : value_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      ThrowSchema(path_ + "." + key, "unknown field");
    }
  }
}

std::string JsonObject::PathOf(const char *key) const {
  return path_ + "." + key;
}

bool JsonObject::Has(const char *key) const {
  auto it = value_.find(key);
  return it != value_.end() && !it->is_null();
}

const Json &JsonObject::Get(const char *key) const {
  auto it = value_.find(key);
  if (it == value_.end()) ThrowSchema(PathOf(key), "missing required field");
  return *it;
}

std::string JsonObject::String(const char *key) const {
  return RequireString(Get(key), PathOf(key));
}

std::string JsonObject::String(const char *key,
                               const std::string &fallback) const {
  return Has(key) ? String(key) : fallback;
}

std::size_t JsonObject::Index(const char *key) const {
  const Json &v = Get(key);
  if (!v.is_number_integer() ||
      (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    ThrowSchema(PathOf(key), "expected non-negative integer");
  }
  return v.get<std::size_t>();
}

std::size_t JsonObject::Index(const char *key, std::size_t fallback) const {
  return Has(key) ? Index(key) : fallback;
}

bool JsonObject::Bool(const char *key, bool fallback) const {
  if (!Has(key)) return fallback;
  const Json &v = Get(key);
  if (!v.is_boolean()) ThrowSchema(PathOf(key), "expected boolean");
  return v.get<bool>();
}

const Json &JsonObject::Array(const char *key) const {
  return RequireArray(Get(key), PathOf(key));
}

Json ToJson(const CaseGraph &graph) {
  Json nodes = Json::array();
  for (const GraphNode &n : graph.nodes) {
    nodes.push_back(
        {{"nodeId", n.node_id}, {"label", n.label}, {"entityType", n.type.Name()}});
  }
  Json edges = Json::array();
  for (const GraphEdge &e : graph.edges) {
    edges.push_back({{"source", e.source},
                     {"target", e.target},
                     {"label", RelationTypeName(e.label)}});
  }
  return {{"docId", graph.doc_id}, {"nodes", nodes}, {"edges", edges}};
}

CaseGraph CaseGraphFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path, {"docId", "nodes", "edges"});
  CaseGraph graph;
  graph.doc_id = obj.String("docId");
  const Json &nodes = obj.Array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    JsonObject n(nodes[i], ElementPath(obj.PathOf("nodes"), i),
                 {"nodeId", "label", "entityType"});
    graph.nodes.push_back({n.String("nodeId"), n.String("label"),
                           EntityType::Parse(n.String("entityType"))});
  }
  const Json &edges = obj.Array("edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = ElementPath(obj.PathOf("edges"), i);
    JsonObject e(edges[i], at, {"source", "target", "label"});
    graph.edges.push_back({e.String("source"), e.String("target"),
                           RequireRelationType(e.Get("label"), at + ".label")});
  }
  return graph;
}

Json ToJson(const Entity &entity) {
  return {{"id", entity.id},
          {"type", entity.type.Name()},
          {"start", entity.span.start},
          {"end", entity.span.end},
          {"text", entity.text}};
}

Entity EntityFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path, {"id", "type", "start", "end", "text"});
  Entity e;
  e.id = obj.String("id");
  e.type = EntityType::Parse(obj.String("type"));
  e.span = {obj.Index("start"), obj.Index("end")};
  e.text = obj.String("text");
  return e;
}

Json ToJson(const RelationAssertion &relation) {
  return {{"id", relation.id},
          {"type", RelationTypeName(relation.type)},
          {"source", relation.source},
          {"target", relation.target}};
}

RelationAssertion RelationFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path, {"id", "type", "source", "target"});
  RelationAssertion r;
  r.id = obj.String("id");
  r.type = RequireRelationType(obj.Get("type"), obj.PathOf("type"));
  r.source = obj.String("source");
  r.target = obj.String("target");
  return r;
}

Json ToJson(const AnnotationSet &set) {
  Json entities = Json::array(), relations = Json::array(), notes = Json::array();
  for (const Entity &e : set.entities) entities.push_back(ToJson(e));
  for (const RelationAssertion &r : set.relations) relations.push_back(ToJson(r));
  for (const AnnotationNote &n : set.notes) {
    notes.push_back({{"target", n.target}, {"text", n.text}});
  }
  return {{"entities", entities}, {"relations", relations}, {"notes", notes}};
}

AnnotationSet AnnotationSetFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path, {"entities", "relations", "notes"});
  AnnotationSet set;
  if (obj.Has("entities")) {
    const Json &list = obj.Array("entities");
    for (std::size_t i = 0; i < list.size(); ++i) {
      set.entities.push_back(
          EntityFromJson(list[i], ElementPath(obj.PathOf("entities"), i)));
    }
  }
  if (obj.Has("relations")) {
    const Json &list = obj.Array("relations");
    for (std::size_t i = 0; i < list.size(); ++i) {
      set.relations.push_back(
          RelationFromJson(list[i], ElementPath(obj.PathOf("relations"), i)));
    }
  }
  if (obj.Has("notes")) {
    const Json &list = obj.Array("notes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      JsonObject n(list[i], ElementPath(obj.PathOf("notes"), i),
                   {"target", "text"});
      set.notes.push_back({n.String("target"), n.String("text")});
    }
  }
  return set;
}

Json ToJson(const Document &doc) {
  Json sections = Json::array(), sentences = Json::array();
  for (const Section &s : doc.sections) {
    sections.push_back(
        {{"name", s.name}, {"start", s.span.start}, {"end", s.span.end}});
  }
  for (const Span &s : doc.sentences) {
    sentences.push_back({{"start", s.start}, {"end", s.end}});
  }
  return {{"docId", doc.doc_id},       {"title", doc.title},
          {"text", doc.text},          {"sections", sections},
          {"sentences", sentences},    {"sourceMeta", doc.source_meta}};
}

Document DocumentFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path,
                 {"docId", "title", "text", "sections", "sentences",
                  "sourceMeta"});
  Document doc;
  doc.doc_id = obj.String("docId");
  doc.title = obj.String("title", "");
  doc.text = obj.String("text");
  if (obj.Has("sections")) {
    const Json &list = obj.Array("sections");
    for (std::size_t i = 0; i < list.size(); ++i) {
      JsonObject s(list[i], ElementPath(obj.PathOf("sections"), i),
                   {"name", "start", "end"});
      doc.sections.push_back({s.String("name"), {s.Index("start"), s.Index("end")}});
    }
  }
  if (obj.Has("sentences")) {
    const Json &list = obj.Array("sentences");
    for (std::size_t i = 0; i < list.size(); ++i) {
      JsonObject s(list[i], ElementPath(obj.PathOf("sentences"), i),
                   {"start", "end"});
      doc.sentences.push_back({s.Index("start"), s.Index("end")});
    }
  }
  if (obj.Has("sourceMeta")) {
    const Json &meta = obj.Get("sourceMeta");
    if (!meta.is_object()) ThrowSchema(obj.PathOf("sourceMeta"), "expected object");
    for (const auto &[key, v] : meta.items()) {
      doc.source_meta[key] = RequireString(v, obj.PathOf("sourceMeta") + "." + key);
    }
  }
  return doc;
}

Json ClosureToJson(const temporal::TemporalGraph &graph) {
  Json out = Json::array();
  for (const auto &[a, b] : graph.before) {
    out.push_back(Triple(RelationType::kBefore, a, b));
  }
  for (const auto &[a, b] : graph.overlap) {
    out.push_back(Triple(RelationType::kOverlap, a, b));
  }
  return out;
}

Json ToJson(const temporal::ConsistencyReport &report) {
  Json witnesses = Json::array();
  for (const temporal::WitnessChain &chain : report.witnesses) {
    Json links = Json::array();
    for (const temporal::TemporalLink &l : chain) {
      links.push_back(Triple(l.type, l.source, l.target));
    }
    witnesses.push_back(std::move(links));
  }
  return {{"status", report.consistent ? "consistent" : "inconsistent"},
          {"witnesses", witnesses}};
}

Json ToJson(const temporal::SatisfactionScore &score) {
  return {{"score", score.score},
          {"applicable", score.applicable},
          {"satisfied", score.satisfied}};
}

Json TimelineToJson(const temporal::Timeline &timeline) {
  Json layers = Json::array();
  for (const auto &layer : timeline) layers.push_back(layer);
  return layers;
}

Json ToJson(const SearchResult &result) {
  Json out = {{"docId", result.doc_id},
              {"score", result.score},
              {"provenance", ProvenanceName(result.provenance)}};
  if (result.provenance == Provenance::kGraph) {
    out["matchedNodes"] = result.matched_nodes;
    Json edges = Json::array();
    for (const GraphEdge &e : result.matched_edges) {
      edges.push_back({{"source", e.source},
                       {"target", e.target},
                       {"label", RelationTypeName(e.label)}});
    }
    out["matchedEdges"] = edges;
  }
  return out;
}

Json ToJson(const std::vector<SearchResult> &results) {
  Json out = Json::array();
  for (const SearchResult &r : results) out.push_back(ToJson(r));
  return out;
}

SearchResult SearchResultFromJson(const Json &value, const std::string &path) {
  JsonObject obj(value, path,
                 {"docId", "score", "provenance", "matchedNodes",
                  "matchedEdges"});
  SearchResult r;
  r.doc_id = obj.String("docId");
  const Json &score = obj.Get("score");
  if (!score.is_number()) ThrowSchema(obj.PathOf("score"), "expected number");
  r.score = score.get<double>();
  std::string provenance = obj.String("provenance");
  if (provenance == "graph") {
    r.provenance = Provenance::kGraph;
    const Json &nodes = obj.Array("matchedNodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      r.matched_nodes.push_back(
          RequireString(nodes[i], ElementPath(obj.PathOf("matchedNodes"), i)));
    }
    const Json &edges = obj.Array("matchedEdges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::string at = ElementPath(obj.PathOf("matchedEdges"), i);
      JsonObject e(edges[i], at, {"source", "target", "label"});
      r.matched_edges.push_back({e.String("source"), e.String("target"),
                                 RequireRelationType(e.Get("label"), at + ".label")});
    }
  } else if (provenance == "keyword") {
    r.provenance = Provenance::kKeyword;
    if (obj.Has("matchedNodes") || obj.Has("matchedEdges")) {
      ThrowSchema(path, "keyword results carry no matches");
    }
  } else {
    ThrowSchema(obj.PathOf("provenance"), "expected \"graph\" or \"keyword\"");
  }
  return r;
}

std::vector<RelationAssertion> RelationListFromJson(const Json &value,
                                                    const std::string &path) {
  RequireArray(value, path);
  std::vector<RelationAssertion> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    std::string at = ElementPath(path, i);
    const Json &item = value[i];
    RelationAssertion r;
    r.id = "R" + std::to_string(i + 1);
    if (item.is_array()) {
      if (item.size() != 3) ThrowSchema(at, "expected [type, source, target]");
      r.type = RequireRelationType(item[0], at + "[0]");
      r.source = RequireString(item[1], at + "[1]");
      r.target = RequireString(item[2], at + "[2]");
    } else {
      JsonObject obj(item, at, {"id", "type", "source", "target"});
      r.id = obj.String("id", r.id);
      r.type = RequireRelationType(obj.Get("type"), obj.PathOf("type"));
      r.source = obj.String("source");
      r.target = obj.String("target");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RelationAssertion> ParseRelationList(std::string_view input) {
  std::vector<RelationAssertion> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    std::size_t eol = input.find('\n', pos);
    if (eol == std::string_view::npos) eol = input.size();
    std::string line(input.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    if (fields.size() != 3) {
      throw Error(ErrorKind::kInvalidArgument,
                  "line " + std::to_string(line_no) +
                      ": expected \"TYPE source target\"",
                  {{"line", line_no}});
    }
    std::optional<RelationType> type = ParseRelationType(fields[0]);
    if (!type) {
      throw Error(ErrorKind::kInvalidArgument,
                  "line " + std::to_string(line_no) +
                      ": unknown relation type \"" + fields[0] + "\"",
                  {{"line", line_no}});
    }
    out.push_back({"R" + std::to_string(out.size() + 1), *type, fields[1],
                   fields[2]});
  }
  return out;
}

Json ErrorToJson(const Error &error) {
  return {{"error",
           {{"kind", ErrorKindName(error.kind())},
            {"message", error.what()},
            {"detail", error.detail()}}}};
}

}  // namespace casegraph
