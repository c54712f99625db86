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

#include "casegraph/corpus_model.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "casegraph/error.h"
#include "casegraph/text.h"

namespace casegraph {

namespace {

struct CoreLabel {
  EntityType::Kind kind;
  const char *name;
  const char *annotation;
};

constexpr CoreLabel kCoreLabels[] = {
    {EntityType::Kind::kSignSymptom, "SignSymptom", "Sign_symptom"},
    {EntityType::Kind::kDiseaseDisorder, "DiseaseDisorder", "Disease_disorder"},
    {EntityType::Kind::kDiagnosticProcedure, "DiagnosticProcedure",
     "Diagnostic_procedure"},
    {EntityType::Kind::kMedication, "Medication", "Medication"},
    {EntityType::Kind::kMedicationDosage, "MedicationDosage",
     "Medication_dosage"},
    {EntityType::Kind::kSeverity, "Severity", "Severity"},
    {EntityType::Kind::kNonbiologicalLocation, "NonbiologicalLocation",
     "Nonbiological_location"},
    {EntityType::Kind::kOccupation, "Occupation", "Occupation"},
    {EntityType::Kind::kTherapeuticProcedure, "TherapeuticProcedure",
     "Therapeutic_procedure"},
};

// Lowercase with separators removed: "Sign_symptom", "Sign/Symptom" and
// "SignSymptom" all become "signsymptom".
std::string LabelKey(std::string_view label) {
  std::string key;
  for (char c : label) {
    if (c == '_' || c == '/' || c == ' ' || c == '-') continue;
    key.push_back(static_cast<char>(
        (c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
  }
  return key;
}

const CoreLabel *FindCore(EntityType::Kind kind) {
  for (const CoreLabel &l : kCoreLabels) {
    if (l.kind == kind) return &l;
  }
  return nullptr;
}

}  // namespace

EntityType EntityType::Other(std::string_view name) {
  std::u32string in = text::Decode(text::Trim(name));
  std::u32string out;
  bool pending = false;
  for (char32_t c : in) {
    if (text::IsSpace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back('_');
    pending = false;
    out.push_back(out.empty() ? c : text::ToLower(c));
  }
  if (!out.empty()) {
    char32_t first = out[0];
    if (first >= 'a' && first <= 'z') out[0] = first - 0x20;
  }
  EntityType t;
  t.kind_ = Kind::kOther;
  t.other_name_ = out.empty() ? "Unknown" : text::Encode(out);
  return t;
}

EntityType EntityType::Parse(std::string_view label) {
  std::string key = LabelKey(text::Trim(label));
  for (const CoreLabel &l : kCoreLabels) {
    if (key == LabelKey(l.name)) return EntityType(l.kind);
  }
  // The annotation guideline calls dosages just "Dosage".
  if (key == "dosage") return EntityType(Kind::kMedicationDosage);
  return Other(label);
}

std::string EntityType::Name() const {
  if (const CoreLabel *l = FindCore(kind_)) return l->name;
  return other_name_;
}

std::string EntityType::AnnotationLabel() const {
  if (const CoreLabel *l = FindCore(kind_)) return l->annotation;
  return other_name_;
}

bool IsTemporal(RelationType type) {
  return type == RelationType::kBefore || type == RelationType::kAfter ||
         type == RelationType::kOverlap;
}

std::string_view RelationTypeName(RelationType type) {
  switch (type) {
    case RelationType::kBefore: return "BEFORE";
    case RelationType::kAfter: return "AFTER";
    case RelationType::kOverlap: return "OVERLAP";
    case RelationType::kIdentical: return "IDENTICAL";
    case RelationType::kModify: return "MODIFY";
  }
  return "BEFORE";
}

std::optional<RelationType> ParseRelationType(std::string_view name) {
  std::string upper;
  for (char c : name) {
    upper.push_back(static_cast<char>((c >= 'a' && c <= 'z') ? c - 32 : c));
  }
  for (RelationType t :
       {RelationType::kBefore, RelationType::kAfter, RelationType::kOverlap,
        RelationType::kIdentical, RelationType::kModify}) {
    if (upper == RelationTypeName(t)) return t;
  }
  return std::nullopt;
}

const GraphNode *CaseGraph::FindNode(std::string_view node_id) const {
  for (const GraphNode &n : nodes) {
    if (n.node_id == node_id) return &n;
  }
  return nullptr;
}

std::string NormalizeNodeLabel(std::string_view text) {
  return text::NormalizeLabel(text);
}

namespace {

// Entity index plus the surviving entity for every IDENTICAL group.
struct MergePlan {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> root;
};

bool EarlierEntity(const Entity &a, const Entity &b) {
  if (a.span.start != b.span.start) return a.span.start < b.span.start;
  return a.id < b.id;
}

MergePlan PlanMerge(const std::vector<Entity> &entities,
                    const std::vector<RelationAssertion> &relations) {
  MergePlan plan;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (!plan.index.emplace(entities[i].id, i).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "duplicate entity id " + entities[i].id,
                  {{"id", entities[i].id}});
    }
  }
  auto lookup = [&](const RelationAssertion &r, const std::string &id) {
    auto it = plan.index.find(id);
    if (it == plan.index.end()) {
      throw Error(ErrorKind::kDanglingReference,
                  "relation " + r.id + " references unknown entity " + id,
                  {{"relation", r.id}, {"missing", id}});
    }
    return it->second;
  };

  // Union-find over IDENTICAL links; the root is always the group survivor.
  std::vector<std::size_t> &parent = plan.root;
  parent.resize(entities.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const RelationAssertion &r : relations) {
    std::size_t s = lookup(r, r.source);
    std::size_t t = lookup(r, r.target);
    if (s == t) {
      throw Error(ErrorKind::kInvalidArgument,
                  "relation " + r.id + " links " + r.source + " to itself",
                  {{"relation", r.id}});
    }
    if (r.type != RelationType::kIdentical) continue;
    std::size_t rs = find(s), rt = find(t);
    if (rs == rt) continue;
    if (EarlierEntity(entities[rs], entities[rt])) parent[rt] = rs;
    else parent[rs] = rt;
  }
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = find(i);
  return plan;
}

}  // namespace

std::map<std::string, std::string> MergedNodeIds(
    const std::vector<Entity> &entities,
    const std::vector<RelationAssertion> &relations) {
  MergePlan plan = PlanMerge(entities, relations);
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    out[entities[i].id] = entities[plan.root[i]].id;
  }
  return out;
}

CaseGraph BuildCaseGraph(const Document &doc,
                         const std::vector<Entity> &entities,
                         const std::vector<RelationAssertion> &relations) {
  MergePlan plan = PlanMerge(entities, relations);
  auto find = [&](std::size_t x) { return plan.root[x]; };
  const auto &index = plan.index;
  auto earlier = [&](std::size_t a, std::size_t b) {
    return EarlierEntity(entities[a], entities[b]);
  };

  CaseGraph graph;
  graph.doc_id = doc.doc_id;
  std::vector<std::size_t> order(entities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), earlier);
  for (std::size_t i : order) {
    if (find(i) != i) continue;
    graph.nodes.push_back({entities[i].id, NormalizeNodeLabel(entities[i].text),
                           entities[i].type});
  }

  std::set<GraphEdge> seen;
  for (const RelationAssertion &r : relations) {
    if (r.type == RelationType::kIdentical) continue;
    const std::string &s = entities[find(index.at(r.source))].id;
    const std::string &t = entities[find(index.at(r.target))].id;
    if (s == t) continue;
    GraphEdge edge{s, t, r.type};
    if (seen.insert(edge).second) graph.edges.push_back(std::move(edge));
  }
  return graph;
}

std::vector<Violation> ValidateGraph(const CaseGraph &graph) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const GraphNode &n : graph.nodes) {
    if (n.node_id.empty()) {
      out.push_back({n.node_id, "empty node id"});
    } else if (!ids.insert(n.node_id).second) {
      out.push_back({n.node_id, "duplicate node id " + n.node_id});
    }
  }
  for (const GraphEdge &e : graph.edges) {
    std::string subject = e.source + "->" + e.target;
    if (e.source == e.target) {
      out.push_back({subject, "self-loop on " + e.source});
      continue;
    }
    for (const std::string *end : {&e.source, &e.target}) {
      if (!ids.count(*end)) {
        out.push_back({subject, "edge references unknown node " + *end});
      }
    }
  }
  return out;
}

std::vector<Violation> ValidateAnnotations(
    const Document &doc, const std::vector<Entity> &entities,
    const std::vector<RelationAssertion> &relations) {
  std::vector<Violation> out;
  std::u32string decoded = text::Decode(doc.text);
  std::set<std::string> ids;
  for (const Entity &e : entities) {
    if (!ids.insert(e.id).second) {
      out.push_back({e.id, "duplicate entity id " + e.id});
    }
    if (e.span.start >= e.span.end || e.span.end > decoded.size()) {
      out.push_back({e.id, "span [" + std::to_string(e.span.start) + "," +
                               std::to_string(e.span.end) +
                               ") out of bounds"});
      continue;
    }
    std::string covered = text::Encode(std::u32string_view(decoded).substr(
        e.span.start, e.span.length()));
    if (covered != e.text) {
      out.push_back({e.id, "text \"" + e.text + "\" does not match \"" +
                               covered + "\""});
    }
  }
  std::set<std::string> rel_ids;
  for (const RelationAssertion &r : relations) {
    if (!rel_ids.insert(r.id).second) {
      out.push_back({r.id, "duplicate relation id " + r.id});
    }
    if (r.source == r.target) {
      out.push_back({r.id, "relation links " + r.source + " to itself"});
    }
    for (const std::string *end : {&r.source, &r.target}) {
      if (!ids.count(*end)) {
        out.push_back({r.id, "relation references unknown entity " + *end});
      }
    }
  }
  return out;
}

}  // namespace casegraph
