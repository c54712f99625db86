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

#ifndef CASEGRAPH_CORPUS_MODEL_H_
#define CASEGRAPH_CORPUS_MODEL_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace casegraph {

// Clinical entity/event category. The core labels form a closed enum; any
// other label is carried as Other(name) so that parsing never fails.
class EntityType {
 public:
  enum class Kind {
    kSignSymptom,
    kDiseaseDisorder,
    kDiagnosticProcedure,
    kMedication,
    kMedicationDosage,
    kSeverity,
    kNonbiologicalLocation,
    kOccupation,
    kTherapeuticProcedure,
    kOther,
  };

  EntityType() = default;
  EntityType(Kind kind)  // NOLINT: implicit
      : kind_(kind), other_name_(kind == Kind::kOther ? "Unknown" : "") {}

  // Builds Other(name) with the name canonicalized: trimmed, inner whitespace
  // replaced by '_', first letter upper case and the rest lower case ("lab
  // value" -> "Lab_value"). The wildcard "*" is kept as is. An empty name
  // yields Other("Unknown").
  static EntityType Other(std::string_view name);

  // Accepts the canonical names ("SignSymptom"), the annotation-file form
  // ("Sign_symptom") and the slash form ("Sign/Symptom"), case-insensitively.
  // Never fails; unrecognized labels become Other.
  static EntityType Parse(std::string_view label);

  // Type-unconstrained marker used by query graphs.
  static EntityType Any() { return Other("*"); }

  Kind kind() const { return kind_; }
  bool is_other() const { return kind_ == Kind::kOther; }
  bool is_any() const { return is_other() && other_name_ == "*"; }
  const std::string &other_name() const { return other_name_; }

  // "SignSymptom", ..., or the Other name. Used by JSON.
  std::string Name() const;
  // "Sign_symptom", ..., or the Other name. Used by standoff files.
  std::string AnnotationLabel() const;

  friend bool operator==(const EntityType &, const EntityType &) = default;
  friend auto operator<=>(const EntityType &, const EntityType &) = default;

 private:
  Kind kind_ = Kind::kOther;
  std::string other_name_ = "Unknown";
};

enum class RelationType { kBefore, kAfter, kOverlap, kIdentical, kModify };

bool IsTemporal(RelationType type);
// "BEFORE", "AFTER", "OVERLAP", "IDENTICAL", "MODIFY".
std::string_view RelationTypeName(RelationType type);
// Case-insensitive inverse of RelationTypeName.
std::optional<RelationType> ParseRelationType(std::string_view name);

// Half-open range of code-point offsets into a document's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool Overlaps(const Span &o) const { return start < o.end && o.start < end; }
  bool Contains(const Span &o) const {
    return start <= o.start && o.end <= end;
  }
  friend bool operator==(const Span &, const Span &) = default;
  friend auto operator<=>(const Span &, const Span &) = default;
};

struct Entity {
  std::string id;
  EntityType type;
  Span span;
  std::string text;

  friend bool operator==(const Entity &, const Entity &) = default;
};

struct RelationAssertion {
  std::string id;
  RelationType type = RelationType::kBefore;
  std::string source;
  std::string target;

  friend bool operator==(const RelationAssertion &,
                         const RelationAssertion &) = default;
};

struct Section {
  std::string name;
  Span span;
  friend bool operator==(const Section &, const Section &) = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::string text;  // canonical text; all offsets address it
  std::vector<Section> sections;
  std::vector<Span> sentences;
  std::map<std::string, std::string> source_meta;

  friend bool operator==(const Document &, const Document &) = default;
};

struct GraphNode {
  std::string node_id;
  std::string label;
  EntityType type;
  friend bool operator==(const GraphNode &, const GraphNode &) = default;
  friend auto operator<=>(const GraphNode &, const GraphNode &) = default;
};

struct GraphEdge {
  std::string source;
  std::string target;
  RelationType label = RelationType::kBefore;
  friend bool operator==(const GraphEdge &, const GraphEdge &) = default;
  friend auto operator<=>(const GraphEdge &, const GraphEdge &) = default;
};

// Per-document graph of typed nodes and labeled edges. A QueryGraph has the
// same shape with an empty doc_id.
struct CaseGraph {
  std::string doc_id;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  const GraphNode *FindNode(std::string_view node_id) const;
  friend bool operator==(const CaseGraph &, const CaseGraph &) = default;
};

using QueryGraph = CaseGraph;

// Node labels are lowercased with whitespace collapsed; this is the matching
// key for graph search.
std::string NormalizeNodeLabel(std::string_view text);

// One node per entity and one edge per relation, except that IDENTICAL
// relations merge their endpoints into a single node. The entity with the
// earliest start offset (then smallest id) survives and every edge is
// re-pointed to it; edges that collapse into self-loops are dropped, and
// duplicate edges are kept once. Nodes come out in span order.
//
// Throws Error(kDanglingReference) naming the missing id, or
// Error(kInvalidArgument) for self-relations and duplicate entity ids.
CaseGraph BuildCaseGraph(const Document &doc,
                         const std::vector<Entity> &entities,
                         const std::vector<RelationAssertion> &relations);

// Maps every entity id to the id of the node it becomes in BuildCaseGraph.
// Same validation and errors as BuildCaseGraph.
std::map<std::string, std::string> MergedNodeIds(
    const std::vector<Entity> &entities,
    const std::vector<RelationAssertion> &relations);

struct Violation {
  std::string subject;  // offending node id or "source->target"
  std::string message;
  friend bool operator==(const Violation &, const Violation &) = default;
};

// Empty iff the graph's invariants hold: unique non-empty node ids, edge
// endpoints present, no self-loops.
std::vector<Violation> ValidateGraph(const CaseGraph &graph);

// Document-scoped checks for entities and relations: spans in bounds, text
// equal to the covered substring, unique ids, resolvable relation endpoints.
std::vector<Violation> ValidateAnnotations(
    const Document &doc, const std::vector<Entity> &entities,
    const std::vector<RelationAssertion> &relations);

}  // namespace casegraph

#endif  // CASEGRAPH_CORPUS_MODEL_H_
